#include "levypos/spec_io.hpp"

#include "levypos/catalog.hpp"
#include "levypos/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace levypos {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw InputError("unknown key '" + key + "' in " + where);
        }
    }
}

double number(const json& obj, const std::string& key, const std::string& where,
              std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) {
            return *fallback;
        }
        throw InputError("missing number '" + key + "' in " + where);
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw InputError("'" + key + "' in " + where + " must be a number");
    }
    return v.get<double>();
}

std::vector<double> numbers(const json& obj, const std::string& key) {
    if (!obj.contains(key)) {
        throw InputError("missing array '" + key + "' in measure");
    }
    const json& v = obj.at(key);
    if (!v.is_array()) {
        throw InputError("'" + key + "' in measure must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& e : v) {
        if (!e.is_number()) {
            throw InputError("'" + key + "' in measure must contain only numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

LevyModel parse_model_spec(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw InputError("spec must be a JSON object");
    }
    reject_unknown(doc, {"schema", "label", "gamma", "sigma2", "measure"}, "spec");
    if (doc.contains("schema")) {
        if (!doc.at("schema").is_number_integer() || doc.at("schema").get<int>() != kSpecSchema) {
            throw InputError("unsupported schema " + doc.at("schema").dump() + "; expected " +
                             std::to_string(kSpecSchema));
        }
    }
    std::string label = "model";
    if (doc.contains("label")) {
        if (!doc.at("label").is_string()) {
            throw InputError("'label' must be a string");
        }
        label = doc.at("label").get<std::string>();
    }
    const double gamma = number(doc, "gamma", "spec", 0.0);
    const double sigma2 = number(doc, "sigma2", "spec", 0.0);
    if (!std::isfinite(gamma)) {
        throw ValidationError("gamma must be finite");
    }
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw ValidationError("sigma2 must be a finite non-negative number, got " + fmt(sigma2));
    }
    if (!doc.contains("measure") || !doc.at("measure").is_object()) {
        throw InputError("missing object 'measure'");
    }
    const json& meas = doc.at("measure");
    if (!meas.contains("kind") || !meas.at("kind").is_string()) {
        throw InputError("measure needs a string 'kind'");
    }
    const std::string kind = meas.at("kind").get<std::string>();

    LevyModel m;
    if (kind == "stable_tails") {
        reject_unknown(meas, {"kind", "alpha", "c_plus", "c_minus"}, "measure");
        const double alpha = number(meas, "alpha", "measure");
        const double c_plus = number(meas, "c_plus", "measure");
        const double c_minus = number(meas, "c_minus", "measure");
        if (!(alpha > 0.0 && alpha < 2.0)) {
            throw ValidationError("not a Lévy measure: alpha = " + fmt(alpha) +
                                  " must lie in (0, 2)");
        }
        if (!(c_plus >= 0.0) || !(c_minus >= 0.0) || !std::isfinite(c_plus) ||
            !std::isfinite(c_minus)) {
            throw ValidationError("not a Lévy measure: c_plus and c_minus must be finite and "
                                  "non-negative");
        }
        m = catalog::power_tails(label, gamma, sigma2, alpha, c_plus, c_minus);
    } else if (kind == "table") {
        reject_unknown(meas, {"kind", "x", "tail_plus", "tail_minus"}, "measure");
        const std::vector<double> x = numbers(meas, "x");
        const std::vector<double> tp = numbers(meas, "tail_plus");
        const std::vector<double> tm = numbers(meas, "tail_minus");
        if (x.size() < 2 || tp.size() != x.size() || tm.size() != x.size()) {
            throw InputError("table measure needs x, tail_plus and tail_minus of equal length >= 2");
        }
        m.label = label;
        m.gamma = gamma;
        m.sigma2 = sigma2;
        try {
            const auto all_zero = [](const std::vector<double>& v) {
                return std::all_of(v.begin(), v.end(), [](double y) { return y == 0.0; });
            };
            m.tail_plus = all_zero(tp) ? TailFunction::zero() : table_tail(x, tp);
            m.tail_minus = all_zero(tm) ? TailFunction::zero() : table_tail(x, tm);
        } catch (const DomainError& e) {
            throw ValidationError(std::string("not a Lévy measure: ") + e.what());
        }
    } else {
        throw InputError("unknown measure kind '" + kind + "'");
    }

    const ValidationReport report = validate_model(m);
    if (report.status == ValidationStatus::Reject) {
        throw ValidationError(report.summary());
    }
    return m;
}

LevyModel load_model_spec(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read spec file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_spec(buf.str());
}

std::string model_spec_json(const LevyModel& m) {
    nlohmann::ordered_json doc;
    doc["schema"] = kSpecSchema;
    doc["label"] = m.label;
    doc["gamma"] = m.gamma;
    doc["sigma2"] = m.sigma2;
    if (m.power) {
        doc["measure"] = {{"kind", "stable_tails"},
                          {"alpha", m.power->alpha},
                          {"c_plus", m.power->c_plus},
                          {"c_minus", m.power->c_minus}};
    } else {
        // Tables and derived models: describe the tails by their breakpoints and values.
        std::set<double> nodes;
        for (const TailFunction* t : {&m.tail_plus, &m.tail_minus}) {
            nodes.insert(t->breakpoints().begin(), t->breakpoints().end());
        }
        std::vector<double> x(nodes.begin(), nodes.end());
        std::vector<double> tp;
        std::vector<double> tm;
        for (const double v : x) {
            tp.push_back(m.tail_plus(v));
            tm.push_back(m.tail_minus(v));
        }
        doc["measure"] = {{"kind", "table"}, {"x", x}, {"tail_plus", tp}, {"tail_minus", tm}};
    }
    return doc.dump(2) + "\n";
}

}  // namespace levypos
