#include "rustseg/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "config_json.hpp"
#include "rustseg/error.hpp"
#include "rustseg/imaging.hpp"

namespace rustseg {

EmitFlags parse_emit(std::string_view list) {
    EmitFlags flags{false, false, false, false};
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const std::size_t comma = std::min(list.find(',', pos), list.size());
        const std::string_view item = list.substr(pos, comma - pos);
        if (item == "mask") flags.mask = true;
        else if (item == "premask") flags.premask = true;
        else if (item == "overlay") flags.overlay = true;
        else if (item == "report") flags.report = true;
        else if (!item.empty()) throw Error(ErrorCode::InvalidArgument, "unknown emit flag '" + std::string(item) + "'");
        pos = comma + 1;
    }
    return flags;
}

namespace {

void check_range(const HsvRange& r, const std::string& at, std::vector<FieldIssue>& issues) {
    auto hue_ok = [](double h) { return h >= 0.0 && h < 360.0; };
    auto unit_ok = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!hue_ok(r.h_lo)) issues.push_back({at + ".h_lo", "must be in [0,360)"});
    if (!hue_ok(r.h_hi)) issues.push_back({at + ".h_hi", "must be in [0,360)"});
    if (!unit_ok(r.s_lo)) issues.push_back({at + ".s_lo", "must be in [0,1]"});
    if (!unit_ok(r.s_hi)) issues.push_back({at + ".s_hi", "must be in [0,1]"});
    if (!unit_ok(r.v_lo)) issues.push_back({at + ".v_lo", "must be in [0,1]"});
    if (!unit_ok(r.v_hi)) issues.push_back({at + ".v_hi", "must be in [0,1]"});
    if (r.s_lo > r.s_hi) issues.push_back({at + ".s_lo", "must not exceed s_hi"});
    if (r.v_lo > r.v_hi) issues.push_back({at + ".v_lo", "must not exceed v_hi"});
}

std::vector<FieldIssue> collect_issues(const PipelineConfig& c) {
    std::vector<FieldIssue> issues;
    if (c.ssr.sigma && !(*c.ssr.sigma > 0.0 && std::isfinite(*c.ssr.sigma)))
        issues.push_back({"ssr.sigma", "must be > 0 or null"});
    if (!(c.ssr.epsilon_floor > 0.0 && c.ssr.epsilon_floor <= 1e-3))
        issues.push_back({"ssr.epsilon_floor", "must be in (0, 1e-3]"});
    if (c.filter.ranges.empty()) issues.push_back({"ranges", "at least one range is required"});
    for (std::size_t i = 0; i < c.filter.ranges.size(); ++i)
        check_range(c.filter.ranges[i], "ranges[" + std::to_string(i) + "]", issues);
    if (!(c.db.eps > 0.0 && std::isfinite(c.db.eps))) issues.push_back({"dbscan.eps", "must be > 0"});
    if (c.db.min_pts < 1) issues.push_back({"dbscan.min_pts", "must be >= 1"});
    if (!(c.rust_threshold_pct >= 0.0 && c.rust_threshold_pct <= 100.0))
        issues.push_back({"rust_threshold_pct", "must be in [0,100]"});
    return issues;
}

}  // namespace

void validate(const PipelineConfig& config) {
    auto issues = collect_issues(config);
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

namespace detail {

Json range_to_object(const HsvRange& r) {
    Json j;
    j["h_lo"] = r.h_lo;
    j["h_hi"] = r.h_hi;
    j["s_lo"] = r.s_lo;
    j["s_hi"] = r.s_hi;
    j["v_lo"] = r.v_lo;
    j["v_hi"] = r.v_hi;
    return j;
}

Json cluster_to_object(const ClusterInfo& c) {
    Json j;
    j["id"] = c.id;
    j["pixel_count"] = c.pixel_count;
    j["bbox"] = {{"x_min", c.bbox.x_min}, {"y_min", c.bbox.y_min}, {"x_max", c.bbox.x_max}, {"y_max", c.bbox.y_max}};
    j["centroid"] = {{"x", c.centroid_x}, {"y", c.centroid_y}};
    return j;
}

Json config_to_object(const PipelineConfig& c) {
    Json j;
    j["ssr"]["sigma"] = c.ssr.sigma ? Json(*c.ssr.sigma) : Json(nullptr);
    j["ssr"]["epsilon_floor"] = c.ssr.epsilon_floor;
    j["ranges"] = Json::array();
    for (const HsvRange& r : c.filter.ranges) j["ranges"].push_back(range_to_object(r));
    j["fusion"] = std::string(to_string(c.filter.fusion));
    j["dbscan"]["eps"] = c.db.eps;
    j["dbscan"]["min_pts"] = c.db.min_pts;
    j["dbscan"]["decimate"] = c.db.decimate;
    j["min_area"] = c.min_area;
    j["rust_threshold_pct"] = c.rust_threshold_pct;
    return j;
}

namespace {

class Reader {
public:
    std::vector<FieldIssue> issues;

    template <typename T>
    void read(const Json& obj, const char* key, const std::string& path, T& out) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        read_value(*it, path, out);
    }

    void read_value(const Json& v, const std::string& path, double& out) {
        if (!v.is_number()) return fail(path, "must be a number");
        out = v.get<double>();
    }

    void read_value(const Json& v, const std::string& path, int& out) {
        if (!v.is_number_integer()) return fail(path, "must be an integer");
        const auto x = v.get<std::int64_t>();
        if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
            return fail(path, "out of range");
        out = static_cast<int>(x);
    }

    void read_value(const Json& v, const std::string& path, std::size_t& out) {
        if (!v.is_number_integer()) return fail(path, "must be an integer");
        if (v.is_number_unsigned()) {
            out = v.get<std::size_t>();
            return;
        }
        const auto x = v.get<std::int64_t>();
        if (x < 0) return fail(path, "must be >= 0");
        out = static_cast<std::size_t>(x);
    }

    void read_value(const Json& v, const std::string& path, bool& out) {
        if (!v.is_boolean()) return fail(path, "must be a boolean");
        out = v.get<bool>();
    }

    void read_value(const Json& v, const std::string& path, std::optional<double>& out) {
        if (v.is_null()) {
            out.reset();
            return;
        }
        if (!v.is_number()) return fail(path, "must be a number or null");
        out = v.get<double>();
    }

    bool expect_object(const Json& v, const std::string& path, std::initializer_list<std::string_view> keys) {
        if (!v.is_object()) {
            fail(path, "must be an object");
            return false;
        }
        for (const auto& item : v.items())
            if (std::find(keys.begin(), keys.end(), item.key()) == keys.end())
                fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
        return true;
    }

    void fail(const std::string& path, std::string msg) { issues.push_back({path, std::move(msg)}); }
};

}  // namespace

PipelineConfig config_from_object(const Json& obj, PipelineConfig base, std::initializer_list<std::string_view> extra) {
    PipelineConfig c = std::move(base);
    Reader rd;
    if (!obj.is_object()) throw ConfigError("", "config must be a JSON object");

    static constexpr std::string_view top_keys[] = {"ssr", "ranges", "fusion", "dbscan", "min_area", "rust_threshold_pct"};
    for (const auto& item : obj.items()) {
        const std::string& k = item.key();
        const bool known = std::find(std::begin(top_keys), std::end(top_keys), k) != std::end(top_keys) ||
                           std::find(extra.begin(), extra.end(), k) != extra.end();
        if (!known) rd.fail(k, "unknown key");
    }

    if (auto it = obj.find("ssr"); it != obj.end() && rd.expect_object(*it, "ssr", {"sigma", "epsilon_floor"})) {
        rd.read(*it, "sigma", "ssr.sigma", c.ssr.sigma);
        rd.read(*it, "epsilon_floor", "ssr.epsilon_floor", c.ssr.epsilon_floor);
    }
    if (auto it = obj.find("ranges"); it != obj.end()) {
        if (!it->is_array()) {
            rd.fail("ranges", "must be an array");
        } else {
            c.filter.ranges.clear();
            for (std::size_t i = 0; i < it->size(); ++i) {
                const std::string at = "ranges[" + std::to_string(i) + "]";
                const Json& rj = (*it)[i];
                HsvRange r;
                if (!rd.expect_object(rj, at, {"h_lo", "h_hi", "s_lo", "s_hi", "v_lo", "v_hi"})) continue;
                for (const char* key : {"h_lo", "h_hi", "s_lo", "s_hi", "v_lo", "v_hi"})
                    if (!rj.contains(key)) rd.fail(at + "." + key, "missing");
                rd.read(rj, "h_lo", at + ".h_lo", r.h_lo);
                rd.read(rj, "h_hi", at + ".h_hi", r.h_hi);
                rd.read(rj, "s_lo", at + ".s_lo", r.s_lo);
                rd.read(rj, "s_hi", at + ".s_hi", r.s_hi);
                rd.read(rj, "v_lo", at + ".v_lo", r.v_lo);
                rd.read(rj, "v_hi", at + ".v_hi", r.v_hi);
                c.filter.ranges.push_back(r);
            }
        }
    }
    if (auto it = obj.find("fusion"); it != obj.end()) {
        if (!it->is_string()) {
            rd.fail("fusion", "must be a string");
        } else {
            try {
                c.filter.fusion = parse_fusion(it->get<std::string>());
            } catch (const Error&) {
                rd.fail("fusion", "must be one of color, and, or");
            }
        }
    }
    if (auto it = obj.find("dbscan"); it != obj.end() && rd.expect_object(*it, "dbscan", {"eps", "min_pts", "decimate"})) {
        rd.read(*it, "eps", "dbscan.eps", c.db.eps);
        rd.read(*it, "min_pts", "dbscan.min_pts", c.db.min_pts);
        rd.read(*it, "decimate", "dbscan.decimate", c.db.decimate);
    }
    rd.read(obj, "min_area", "min_area", c.min_area);
    rd.read(obj, "rust_threshold_pct", "rust_threshold_pct", c.rust_threshold_pct);

    if (rd.issues.empty()) rd.issues = collect_issues(c);
    if (!rd.issues.empty()) throw ConfigError(std::move(rd.issues));
    return c;
}

}  // namespace detail

std::string config_to_json(const PipelineConfig& config) {
    return detail::config_to_object(config).dump(2) + "\n";
}

PipelineConfig config_from_json(std::string_view text) {
    detail::Json j;
    try {
        j = detail::Json::parse(text.begin(), text.end());
    } catch (const detail::Json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    return detail::config_from_object(j, PipelineConfig{});
}

PipelineConfig load_config(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return config_from_json(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace rustseg
