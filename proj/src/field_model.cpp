#include "weedplan/field_model.hpp"

#include "weedplan/errors.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <system_error>

namespace weedplan {

namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit_uniform(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double exponential(std::mt19937_64 &rng, double rate) { return -std::log1p(-unit_uniform(rng)) / rate; }

void require_finite_positive(double v, const char *name) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw ParameterError(std::string(name) + " must be finite and > 0");
    }
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) {
        out.push_back(trim(cur));
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

template <typename T> T parse_number(const std::string &text, const std::string &what, std::size_t line) {
    T value{};
    const auto *begin = text.data();
    const auto *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ParseError("invalid " + what + " '" + text + "'", line);
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            throw ParseError("non-finite " + what, line);
        }
    }
    return value;
}

} // namespace

std::string to_string(PlantKind kind) { return kind == PlantKind::crop ? "crop" : "weed"; }

bool spatial_less(const PlantInstance &a, const PlantInstance &b) {
    if (a.x != b.x) {
        return a.x < b.x;
    }
    if (a.y != b.y) {
        return a.y < b.y;
    }
    return a.id < b.id;
}

void sort_plants(std::vector<PlantInstance> &plants) { std::sort(plants.begin(), plants.end(), spatial_less); }

std::vector<PlantInstance> WeedField::weeds() const {
    std::vector<PlantInstance> out;
    std::copy_if(plants.begin(), plants.end(), std::back_inserter(out),
                 [](const PlantInstance &p) { return p.kind == PlantKind::weed; });
    return out;
}

std::size_t WeedField::weed_count() const {
    return static_cast<std::size_t>(
        std::count_if(plants.begin(), plants.end(), [](const PlantInstance &p) { return p.kind == PlantKind::weed; }));
}

WeedField generate_field(const FieldParams &params) {
    if (!std::isfinite(params.lambda) || params.lambda < 0.0) {
        throw ParameterError("lambda must be finite and >= 0");
    }
    require_finite_positive(params.length_m, "length");
    require_finite_positive(params.lane_width_m, "lane_width");
    require_finite_positive(params.crop_spacing_m, "crop_spacing");
    if (params.num_crop_rows < 0) {
        throw ParameterError("num_crop_rows must be >= 0");
    }

    WeedField field;
    field.lane_width_m = params.lane_width_m;
    field.length_m = params.length_m;
    field.num_crop_rows = params.num_crop_rows;
    field.density_param = params.lambda;
    field.seed = params.seed;

    std::mt19937_64 rng(params.seed);
    const double rate = params.lambda * params.lane_width_m;
    if (rate > 0.0) {
        double x = exponential(rng, rate);
        while (x <= params.length_m) {
            PlantInstance weed;
            weed.kind = PlantKind::weed;
            weed.species = "weed";
            weed.x = x;
            weed.y = unit_uniform(rng) * params.lane_width_m;
            field.plants.push_back(std::move(weed));
            x += exponential(rng, rate);
        }
    }

    for (int row = 0; row < params.num_crop_rows; ++row) {
        const double y = (row + 0.5) * params.lane_width_m / params.num_crop_rows;
        for (std::int64_t k = 0;; ++k) {
            const double x = (static_cast<double>(k) + 0.5) * params.crop_spacing_m;
            if (x > params.length_m) {
                break;
            }
            PlantInstance crop;
            crop.kind = PlantKind::crop;
            crop.species = "crop";
            crop.x = x;
            crop.y = y;
            field.plants.push_back(std::move(crop));
        }
    }

    sort_plants(field.plants);
    std::int64_t next_id = 0;
    for (auto &p : field.plants) {
        p.id = next_id++;
    }
    return field;
}

void validate_field(const WeedField &field) {
    if (!std::isfinite(field.lane_width_m) || field.lane_width_m <= 0.0) {
        throw ValidationError("lane_width_m must be > 0");
    }
    if (!std::isfinite(field.length_m) || field.length_m <= 0.0) {
        throw ValidationError("length_m must be > 0");
    }
    if (field.num_crop_rows < 0) {
        throw ValidationError("num_crop_rows must be >= 0");
    }
    std::set<std::int64_t> ids;
    for (std::size_t i = 0; i < field.plants.size(); ++i) {
        const auto &p = field.plants[i];
        if (!(p.x >= 0.0 && p.x <= field.length_m)) {
            throw ValidationError("plant " + std::to_string(p.id) + " has x=" + format_double(p.x) +
                                  " outside [0, " + format_double(field.length_m) + "]");
        }
        if (!(p.y >= 0.0 && p.y <= field.lane_width_m)) {
            throw ValidationError("plant " + std::to_string(p.id) + " has y=" + format_double(p.y) +
                                  " outside [0, " + format_double(field.lane_width_m) + "]");
        }
        if (!(p.area >= 0.0)) {
            throw ValidationError("plant " + std::to_string(p.id) + " has negative area");
        }
        if (!ids.insert(p.id).second) {
            throw ValidationError("duplicate plant id " + std::to_string(p.id));
        }
        if (i > 0 && !spatial_less(field.plants[i - 1], p)) {
            throw ValidationError("plants are not in spatial order");
        }
    }
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("cannot format double");
    }
    return std::string(buf, ptr);
}

WeedField parse_field(std::istream &in) {
    WeedField field;
    field.plants.clear();
    bool have_header = false;
    bool have_width = false;
    bool have_length = false;
    bool have_rows = false;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') {
            raw.pop_back();
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (!have_header) {
            if (line.front() != '#') {
                throw ParseError("expected '# lane_width_m=...,length_m=...,num_crop_rows=...' header", line_no);
            }
            for (const auto &kv : split(trim(std::string_view(line).substr(1)), ',')) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    throw ParseError("header entry '" + kv + "' is not key=value", line_no);
                }
                const std::string key = trim(std::string_view(kv).substr(0, eq));
                const std::string value = trim(std::string_view(kv).substr(eq + 1));
                if (key == "lane_width_m") {
                    field.lane_width_m = parse_number<double>(value, key, line_no);
                    have_width = true;
                } else if (key == "length_m") {
                    field.length_m = parse_number<double>(value, key, line_no);
                    have_length = true;
                } else if (key == "num_crop_rows") {
                    field.num_crop_rows = parse_number<int>(value, key, line_no);
                    have_rows = true;
                } else if (key == "lambda") {
                    field.density_param = parse_number<double>(value, key, line_no);
                } else if (key == "seed") {
                    field.seed = parse_number<std::uint64_t>(value, key, line_no);
                } else {
                    throw ParseError("unknown header key '" + key + "'", line_no);
                }
            }
            if (!(have_width && have_length && have_rows)) {
                throw ParseError("header must define lane_width_m, length_m and num_crop_rows", line_no);
            }
            have_header = true;
            continue;
        }
        if (line.front() == '#') {
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 6) {
            throw ParseError("expected 6 columns id,kind,species,x_m,y_m,area_m2, got " + std::to_string(cols.size()),
                             line_no);
        }
        PlantInstance p;
        p.id = parse_number<std::int64_t>(cols[0], "id", line_no);
        if (cols[1] == "crop") {
            p.kind = PlantKind::crop;
        } else if (cols[1] == "weed") {
            p.kind = PlantKind::weed;
        } else {
            throw ParseError("kind must be crop or weed, got '" + cols[1] + "'", line_no);
        }
        p.species = cols[2];
        p.x = parse_number<double>(cols[3], "x_m", line_no);
        p.y = parse_number<double>(cols[4], "y_m", line_no);
        p.area = cols[5].empty() ? 0.0 : parse_number<double>(cols[5], "area_m2", line_no);
        field.plants.push_back(std::move(p));
    }
    if (!have_header) {
        throw ParseError("missing header line", line_no == 0 ? 1 : line_no);
    }
    sort_plants(field.plants);
    validate_field(field);
    return field;
}

WeedField load_field(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open field file " + path.string(), 0);
    }
    return parse_field(in);
}

void write_field(std::ostream &out, const WeedField &field) {
    out << "# lane_width_m=" << format_double(field.lane_width_m) << ",length_m=" << format_double(field.length_m)
        << ",num_crop_rows=" << field.num_crop_rows;
    if (field.density_param) {
        out << ",lambda=" << format_double(*field.density_param);
    }
    if (field.seed) {
        out << ",seed=" << *field.seed;
    }
    out << '\n';
    auto plants = field.plants;
    sort_plants(plants);
    for (const auto &p : plants) {
        if (p.species.find_first_of(",\n\r") != std::string::npos) {
            throw ValidationError("species label of plant " + std::to_string(p.id) + " contains a separator");
        }
        out << p.id << ',' << to_string(p.kind) << ',' << p.species << ',' << format_double(p.x) << ','
            << format_double(p.y) << ',' << format_double(p.area) << '\n';
    }
}

void save_field(const std::filesystem::path &path, const WeedField &field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write field file " + path.string());
    }
    write_field(out, field);
}

double chi_squared_critical_5pct(int degrees_of_freedom) {
    if (degrees_of_freedom < 1) {
        throw ParameterError("degrees of freedom must be >= 1");
    }
    const boost::math::chi_squared dist(static_cast<double>(degrees_of_freedom));
    return boost::math::quantile(boost::math::complement(dist, 0.05));
}

UniformityVerdict uniformity_test(const WeedField &field, int num_bins_x, int num_bins_y) {
    if (num_bins_x < 1 || num_bins_y < 1 || num_bins_x * num_bins_y < 2) {
        throw ParameterError("uniformity test needs at least 2 bins");
    }
    const auto cells = static_cast<std::size_t>(num_bins_x) * static_cast<std::size_t>(num_bins_y);
    const auto weeds = field.weeds();
    if (weeds.size() < 5 * cells) {
        throw InsufficientDataError("uniformity test needs >= " + std::to_string(5 * cells) + " weeds for " +
                                    std::to_string(cells) + " cells, field has " + std::to_string(weeds.size()));
    }

    std::vector<std::size_t> counts(cells, 0);
    auto bin = [](double v, double extent, int n) {
        const auto i = static_cast<int>(std::floor(v / extent * n));
        return std::clamp(i, 0, n - 1);
    };
    for (const auto &w : weeds) {
        const int bx = bin(w.x, field.length_m, num_bins_x);
        const int by = bin(w.y, field.lane_width_m, num_bins_y);
        ++counts[static_cast<std::size_t>(by) * static_cast<std::size_t>(num_bins_x) + static_cast<std::size_t>(bx)];
    }

    const double expected = static_cast<double>(weeds.size()) / static_cast<double>(cells);
    double statistic = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        statistic += d * d / expected;
    }

    UniformityVerdict v;
    v.statistic = statistic;
    v.degrees_of_freedom = static_cast<int>(cells) - 1;
    v.critical_value = chi_squared_critical_5pct(v.degrees_of_freedom);
    v.uniform_at_5pct = statistic <= v.critical_value;
    return v;
}

} // namespace weedplan
