#include "fixtures.hpp"

#include "weedplan/errors.hpp"
#include "weedplan/field_model.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace weedplan;
using weedplan::testing::weed_at;

namespace {

std::vector<double> weed_gaps(const WeedField &f) {
    std::vector<double> gaps;
    double prev = 0.0;
    for (const auto &p : f.plants) {
        if (p.kind == PlantKind::weed) {
            gaps.push_back(p.x - prev);
            prev = p.x;
        }
    }
    return gaps;
}

// Kolmogorov-Smirnov distance between the empirical gaps and Exp(rate).
double ks_exponential(std::vector<double> gaps, double rate) {
    std::sort(gaps.begin(), gaps.end());
    const double n = static_cast<double>(gaps.size());
    double d = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const double cdf = 1.0 - std::exp(-rate * gaps[i]);
        d = std::max({d, std::abs(cdf - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - cdf)});
    }
    return d;
}

WeedField parse(const std::string &text) {
    std::istringstream in(text);
    return parse_field(in);
}

} // namespace

TEST_CASE("weed x-gaps follow the exponential model") {
    FieldParams p;
    p.lambda = 3.0;
    p.lane_width_m = 1.3;
    p.length_m = 3000.0;
    p.seed = 11;
    const auto gaps = weed_gaps(generate_field(p));
    REQUIRE(gaps.size() >= 10000);
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
    CHECK(mean == doctest::Approx(1.0 / (3.0 * 1.3)).epsilon(0.05));

    p.lambda = 10.0;
    p.length_m = 1000.0;
    const auto gaps10 = weed_gaps(generate_field(p));
    REQUIRE(gaps10.size() >= 10000);
    CHECK(ks_exponential(gaps10, 10.0 * 1.3) < 0.05);
}

TEST_CASE("zero density gives crops only") {
    FieldParams p;
    p.lambda = 0.0;
    p.length_m = 20.0;
    const auto f = generate_field(p);
    CHECK(f.weed_count() == 0);
    CHECK_FALSE(f.plants.empty());
    CHECK(std::all_of(f.plants.begin(), f.plants.end(), [](const PlantInstance &pl) { return pl.kind == PlantKind::crop; }));
}

TEST_CASE("crops sit on equally spaced row lines") {
    FieldParams p;
    p.lambda = 0.0;
    p.length_m = 1.0;
    p.num_crop_rows = 3;
    p.crop_spacing_m = 0.15;
    const auto f = generate_field(p);
    // 0.075 + k*0.15 <= 1.0 gives k = 0..6 per row.
    CHECK(f.plants.size() == 21);
    for (const auto &pl : f.plants) {
        const double row = pl.y / (1.3 / 3.0) - 0.5;
        CHECK(std::abs(row - std::round(row)) < 1e-9);
    }
}

TEST_CASE("weed counts follow Poisson statistics") {
    // Expected count lambda * width * length = 1040, sigma = sqrt(1040).
    // Each seed lands outside 3 sigma with probability 0.27%, so across 100
    // seeds the suite checks the z-score distribution instead of every seed.
    const double expected = 40.0 * 1.3 * 20.0;
    const double sigma = std::sqrt(expected);
    int beyond = 0;
    double sum_z = 0.0;
    double sum_z2 = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        FieldParams p;
        p.lambda = 40.0;
        p.seed = seed;
        const auto f = generate_field(p);
        // Independent count through the serialized form.
        std::ostringstream out;
        write_field(out, f);
        std::istringstream in(out.str());
        std::string line;
        std::size_t counted = 0;
        while (std::getline(in, line)) {
            counted += line.find(",weed,") != std::string::npos ? 1 : 0;
        }
        CHECK(counted == f.weed_count());
        const double z = (static_cast<double>(counted) - expected) / sigma;
        CHECK_MESSAGE(std::abs(z) <= 4.5, "seed " << seed);
        beyond += std::abs(z) > 3.0 ? 1 : 0;
        sum_z += z;
        sum_z2 += z * z;
    }
    // P(3 or more of 100 beyond 3 sigma) is about 0.3%.
    CHECK(beyond <= 2);
    CHECK(std::abs(sum_z / 100.0) <= 0.35);
    CHECK(sum_z2 / 100.0 == doctest::Approx(1.0).epsilon(0.4));
}

TEST_CASE("generation is deterministic and respects lane bounds") {
    FieldParams p;
    p.lambda = 17.0;
    p.seed = 99;
    CHECK(generate_field(p) == generate_field(p));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lam(0.0, 60.0);
    std::uniform_real_distribution<double> width(0.2, 3.0);
    std::uniform_real_distribution<double> len(0.5, 30.0);
    for (int i = 0; i < 200; ++i) {
        FieldParams q;
        q.lambda = lam(rng);
        q.lane_width_m = width(rng);
        q.length_m = len(rng);
        q.seed = rng();
        const auto f = generate_field(q);
        CHECK_NOTHROW(validate_field(f));
    }
}

TEST_CASE("invalid generator parameters are rejected") {
    FieldParams p;
    p.lambda = -1.0;
    CHECK_THROWS_AS(generate_field(p), ParameterError);
    p.lambda = std::nan("");
    CHECK_THROWS_AS(generate_field(p), ParameterError);
    p = FieldParams{};
    p.length_m = 0.0;
    CHECK_THROWS_AS(generate_field(p), ParameterError);
    p = FieldParams{};
    p.crop_spacing_m = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(generate_field(p), ParameterError);
}

TEST_CASE("load_field sorts plants and validates bounds") {
    const auto f = parse("# lane_width_m=1.3,length_m=20,num_crop_rows=3\n"
                         "1,weed,a,1.0,0.2,0\n"
                         "2,weed,a,0.5,0.3,0\n"
                         "3,weed,a,2.0,0.4,0.01\n");
    REQUIRE(f.plants.size() == 3);
    CHECK(f.plants[0].x == 0.5);
    CHECK(f.plants[1].x == 1.0);
    CHECK(f.plants[2].x == 2.0);
    CHECK(f.lane_width_m == 1.3);
    CHECK(f.length_m == 20.0);
    CHECK_FALSE(f.density_param.has_value());

    const auto empty = parse("# lane_width_m=1.3,length_m=20,num_crop_rows=3\n");
    CHECK(empty.plants.empty());

    CHECK_THROWS_AS(parse("# lane_width_m=1.3,length_m=20,num_crop_rows=3\n1,weed,a,1.0,1.4,0\n"), ValidationError);
}

TEST_CASE("malformed field rows name the line") {
    try {
        parse("# lane_width_m=1.3,length_m=20,num_crop_rows=3\n1,weed,a,1.0,0.2,0\n2,weed,a,abc,0.2,0\n");
        FAIL("expected parse error");
    } catch (const ParseError &e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("1,weed,a,1.0,0.2,0\n"), ParseError);
    CHECK_THROWS_AS(parse("# lane_width_m=1.3,length_m=20,num_crop_rows=3\n1,tree,a,1.0,0.2,0\n"), ParseError);
    CHECK_THROWS_AS(parse("# lane_width_m=1.3,length_m=20,num_crop_rows=3\n1,weed,a,1.0,0.2\n"), ParseError);
    CHECK_THROWS_AS(parse("# lane_width_m=1.3,length_m=20\n"), ParseError);
    CHECK_THROWS_AS(parse("# lane_width_m=1.3,length_m=20,num_crop_rows=3\n1,weed,a,1,0.2,0\n1,weed,a,2,0.2,0\n"),
                    ValidationError);
}

TEST_CASE("save/load round trip is the identity") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        FieldParams p;
        p.lambda = static_cast<double>(seed) * 2.5;
        p.seed = seed;
        p.length_m = 5.0;
        const auto f = generate_field(p);
        const auto path = weedplan::testing::temp_path("roundtrip.csv");
        save_field(path, f);
        CHECK(load_field(path) == f);
    }
    WeedField handmade;
    handmade.plants = {weed_at(7, 0.1, 0.0), weed_at(3, 0.1, 1.3)};
    handmade.plants[0].species = "amaranth";
    handmade.plants[1].area = 0.0025;
    std::ostringstream out;
    write_field(out, handmade);
    CHECK(parse(out.str()) == handmade);
}

TEST_CASE("chi-squared critical value matches the table") {
    CHECK(chi_squared_critical_5pct(7) == doctest::Approx(14.067).epsilon(1e-4));
    CHECK(chi_squared_critical_5pct(1) == doctest::Approx(3.841).epsilon(1e-3));
}

TEST_CASE("uniformity test extremes") {
    WeedField f;
    f.lane_width_m = 1.3;
    f.length_m = 20.0;
    // 4 x 2 grid, 6 weeds at the center of every cell.
    std::int64_t id = 0;
    for (int bx = 0; bx < 4; ++bx) {
        for (int by = 0; by < 2; ++by) {
            for (int k = 0; k < 6; ++k) {
                f.plants.push_back(weed_at(id++, 2.5 + 5.0 * bx + 0.1 * k, 0.325 + 0.65 * by));
            }
        }
    }
    sort_plants(f.plants);
    auto v = uniformity_test(f, 4, 2);
    CHECK(v.statistic == 0.0);
    CHECK(v.degrees_of_freedom == 7);
    CHECK(v.uniform_at_5pct);

    WeedField clumped;
    clumped.lane_width_m = 1.3;
    clumped.length_m = 20.0;
    for (std::int64_t i = 0; i < 48; ++i) {
        clumped.plants.push_back(weed_at(i, 1.0 + 0.01 * static_cast<double>(i), 0.1));
    }
    v = uniformity_test(clumped, 4, 2);
    CHECK(v.statistic == doctest::Approx(48.0 * 7.0));
    CHECK_FALSE(v.uniform_at_5pct);

    clumped.plants.resize(39);
    CHECK_THROWS_AS(uniformity_test(clumped, 4, 2), InsufficientDataError);
    CHECK_THROWS_AS(uniformity_test(clumped, 1, 1), ParameterError);
}

TEST_CASE("generated fields pass the uniformity test at the nominal rate") {
    // A 5% test on a uniform generator passes 95% of fields; 1000 seeds put
    // the rate within +-2.9 binomial sigma of that.
    int uniform = 0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        FieldParams p;
        p.lambda = 10.0;
        p.seed = seed;
        uniform += uniformity_test(generate_field(p), 4, 2).uniform_at_5pct ? 1 : 0;
    }
    CHECK(uniform >= 930);
    CHECK(uniform <= 970);
}
