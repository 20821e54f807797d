#include "ltvcomm/json.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ltvcomm {

using nlohmann::json;

namespace {

std::string required_string(const json& j, const char* key) {
    if (!j.contains(key)) throw SystemError(std::string("missing field \"") + key + "\"");
    if (!j[key].is_string()) throw SystemError(std::string("field \"") + key + "\" must be an expression string");
    return j[key].get<std::string>();
}

double required_number(const json& j, const char* key) {
    if (!j.contains(key)) throw SystemError(std::string("missing field \"") + key + "\"");
    if (!j[key].is_number()) throw SystemError(std::string("field \"") + key + "\" must be a number");
    return j[key].get<double>();
}

CoeffExpr parse_field(const json& j, const char* key) {
    const std::string text = required_string(j, key);
    try {
        return parse(text);
    } catch (const ParseError& e) {
        throw SystemError(std::string("field \"") + key + "\": " + e.what());
    }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const LTVSystem& s) {
    json j = {{"a2", s.a2.render()}, {"a1", s.a1.render()}, {"a0", s.a0.render()}, {"t0", s.t0}};
    if (s.ic) j["ic"] = {{"y0", s.ic->y0}, {"dy0", s.ic->dy0}};
    return j;
}

LTVSystem system_from_json(const json& j) {
    if (!j.is_object()) throw SystemError("system file must be a JSON object");
    LTVSystem s;
    s.a2 = parse_field(j, "a2");
    s.a1 = parse_field(j, "a1");
    s.a0 = parse_field(j, "a0");
    s.t0 = required_number(j, "t0");
    if (j.contains("ic") && !j["ic"].is_null()) {
        const json& ic = j["ic"];
        if (!ic.is_object()) throw SystemError("field \"ic\" must be an object");
        s.ic = InitialState{required_number(ic, "y0"), required_number(ic, "dy0")};
    }
    return s;
}

LTVSystem system_from_json_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SystemError(std::string("malformed system file: ") + e.what());
    }
    LTVSystem s = system_from_json(j);
    validate(s, default_grid(s.t0));
    return s;
}

std::string system_to_json_text(const LTVSystem& s) { return to_json(s).dump(2) + "\n"; }

LTVSystem load_system(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SystemError("cannot open system file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return system_from_json_text(buf.str());
    } catch (const SystemError& e) {
        throw SystemError(path.string() + ": " + e.what());
    }
}

void save_system(const LTVSystem& s, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw SystemError("cannot write system file " + path.string());
    out << system_to_json_text(s);
    if (!out) throw SystemError("failed writing system file " + path.string());
}

json to_json(const PairConstants& k) { return json::array({k.c2, k.c1, k.c0}); }

json to_json(const CommutativityReport& r) {
    const PairResiduals& res = r.residuals;
    json j = {
        {"verdict", to_string(r.verdict)},
        {"constants", r.constants ? to_json(*r.constants) : json(nullptr)},
        {"invariant_a", r.invariant_a},
        {"invariant_b", r.invariant_b},
        {"zero_ic_commutative", r.zero_ic_commutative},
        {"residuals",
         {{"k2", res.k2},
          {"k1", res.k1},
          {"k0", res.k0},
          {"invariant_a", res.invariant_a},
          {"invariant_b", res.invariant_b},
          {"state_gap", optional_number(res.state_gap)},
          {"quadratic_gap", optional_number(res.quadratic_gap)},
          {"derivative_gap", optional_number(res.derivative_gap)}}},
        {"failed_condition", r.failed_condition ? json(*r.failed_condition) : json(nullptr)},
    };
    return j;
}

json to_json(const TransitivityReport& r) {
    json j = {
        {"holds", r.holds()},
        {"ab", to_json(r.ab)},
        {"bc", to_json(r.bc)},
        {"ac", to_json(r.ac)},
        {"composed_p", r.composed ? to_json(r.composed->p) : json(nullptr)},
        {"composition_degenerate", r.composed ? json(r.composed->degenerate) : json(nullptr)},
        {"composition_gap", optional_number(r.composition_gap)},
        {"constants_match", r.constants_match},
        {"ratio_consistency_residual", optional_number(r.ratio_consistency_residual)},
        {"composed_ratio_residual", optional_number(r.composed_ratio_residual)},
    };
    return j;
}

json to_json(const ComparisonMetrics& m) {
    json windows = json::array();
    for (const auto& w : m.windows) {
        windows.push_back({{"lo", w.window.lo}, {"hi", w.window.hi}, {"max_abs_diff", w.max_abs_diff}});
    }
    return {{"max_abs_diff", m.max_abs_diff}, {"rms_diff", m.rms_diff}, {"windows", windows}};
}

PairConstants parse_constants(std::string_view text) {
    double v[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        const char* begin = text.data() + pos;
        auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), v[i]);
        if (ec != std::errc{}) throw std::invalid_argument("malformed constants '" + std::string(text) + "'");
        pos = static_cast<std::size_t>(ptr - text.data());
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (i < 2) {
            if (pos >= text.size() || text[pos] != ',') {
                throw std::invalid_argument("expected three comma-separated constants, got '" + std::string(text) + "'");
            }
            ++pos;
        }
    }
    if (pos != text.size()) throw std::invalid_argument("trailing text in constants '" + std::string(text) + "'");
    return {v[0], v[1], v[2]};
}

}  // namespace ltvcomm
