#include "sepdet/descriptors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sepdet/error.hpp"

namespace sepdet {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::BadDescriptor, "field '" + field + "': " + what);
}

Rational exact_from_double(double v, const std::string& field) {
    if (!std::isfinite(v)) bad(field, "coordinate is not finite");
    int exponent = 0;
    const double mantissa = std::frexp(v, &exponent);
    // mantissa * 2^53 is an integer for every finite double
    const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
    using boost::multiprecision::cpp_int;
    Rational out(scaled);
    exponent -= 53;
    const cpp_int power = cpp_int(1) << std::abs(exponent);
    if (exponent >= 0)
        out *= power;
    else
        out /= power;
    return out;
}

Rational parse_decimal(const std::string& text, const std::string& field) {
    std::string digits;
    std::size_t frac = 0;
    bool seen_point = false;
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_point) ++frac;
        } else {
            bad(field, "'" + text + "' is not a rational number");
        }
    }
    if (digits.empty()) bad(field, "'" + text + "' is not a rational number");
    using boost::multiprecision::cpp_int;
    // a leading zero would make cpp_int read the digits as octal
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    Rational out{cpp_int(digits)};
    out /= cpp_int(boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(frac)));
    return negative ? Rational(-out) : out;
}

double to_double(const json& value, const std::string& field) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) return parse_rational(value, field).convert_to<double>();
    bad(field, "expected a number");
}

const json& require(const json& object, const std::string& key, const std::string& context) {
    if (!object.is_object()) bad(context, "expected an object");
    auto it = object.find(key);
    if (it == object.end()) bad(context + "." + key, "missing");
    return *it;
}

std::vector<double> param_positive_entries(ProblemFamily family, const Param& p) {
    if (family == ProblemFamily::torus_slope) return {p.at(1), p.at(2)};
    return {p.at(0)};
}

}  // namespace

Rational parse_rational(const json& value, const std::string& field) {
    if (value.is_number_integer()) return Rational(value.get<long long>());
    if (value.is_number()) return exact_from_double(value.get<double>(), field);
    if (!value.is_string()) bad(field, "expected a rational number");
    const auto text = value.get<std::string>();
    const auto slash = text.find('/');
    if (slash == std::string::npos) return parse_decimal(text, field);
    const Rational num = parse_decimal(text.substr(0, slash), field);
    const Rational den = parse_decimal(text.substr(slash + 1), field);
    if (den == 0) bad(field, "zero denominator");
    return num / den;
}

ExtReal parse_ext_real(const json& value, const std::string& field) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        const auto text = value.get<std::string>();
        if (text == "+inf" || text == "inf") return ExtReal::plus_infinity();
        if (text == "-inf") return ExtReal::minus_infinity();
        return parse_rational(value, field).convert_to<double>();
    }
    bad(field, "expected a number or \"+inf\"");
}

json to_json(ExtReal value) {
    if (value.is_finite()) return value.value();
    return value.to_string();
}

MetricSpace parse_space(const json& descriptor) {
    if (!descriptor.is_object()) bad("space", "expected an object");
    const auto kind = descriptor.value("kind", std::string("finite"));
    if (kind != "finite") bad("kind", "only finite spaces can be described, got '" + kind + "'");
    const auto& metric_field = require(descriptor, "metric", "space");
    if (!metric_field.is_string()) bad("metric", "expected \"euclidean\" or \"matrix\"");
    const auto metric = metric_field.get<std::string>();

    if (metric == "euclidean") {
        const auto& pts = require(descriptor, "points", "space");
        if (!pts.is_array() || pts.empty()) bad("points", "expected a nonempty array");
        std::vector<Point> points;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const std::string field = "points[" + std::to_string(i) + "]";
            const json* coords = &pts[i];
            std::string id = "p" + std::to_string(i);
            if (pts[i].is_object()) {
                coords = &require(pts[i], "coords", field);
                if (pts[i].contains("id")) {
                    if (!pts[i]["id"].is_string()) bad(field + ".id", "expected a string");
                    id = pts[i]["id"].get<std::string>();
                }
            } else if (pts[i].is_number() || pts[i].is_string()) {
                std::vector<Rational> one{parse_rational(pts[i], field)};
                points.push_back(Point{id, std::move(one)});
                continue;
            }
            if (!coords->is_array() || coords->empty()) bad(field + ".coords", "expected a nonempty array");
            std::vector<Rational> v;
            for (std::size_t k = 0; k < coords->size(); ++k)
                v.push_back(parse_rational((*coords)[k], field + ".coords[" + std::to_string(k) + "]"));
            if (!points.empty() && points.front().coords->size() != v.size())
                bad(field + ".coords", "dimension differs from points[0]");
            points.push_back(Point{id, std::move(v)});
        }
        return MetricSpace::euclidean(std::move(points));
    }
    if (metric == "matrix") {
        const auto& rows = require(descriptor, "matrix", "space");
        if (!rows.is_array() || rows.empty()) bad("matrix", "expected a nonempty array of rows");
        std::vector<Point> points;
        if (descriptor.contains("points")) {
            const auto& ids = descriptor["points"];
            if (!ids.is_array()) bad("points", "expected an array of ids");
            for (std::size_t i = 0; i < ids.size(); ++i) {
                if (!ids[i].is_string()) bad("points[" + std::to_string(i) + "]", "expected an id string");
                points.push_back(Point{ids[i].get<std::string>(), std::nullopt});
            }
        } else {
            for (std::size_t i = 0; i < rows.size(); ++i) points.push_back(Point{"p" + std::to_string(i), std::nullopt});
        }
        if (points.size() != rows.size()) bad("points", "count differs from the number of matrix rows");
        std::vector<std::vector<double>> matrix(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string field = "matrix[" + std::to_string(i) + "]";
            if (!rows[i].is_array() || rows[i].size() != rows.size()) bad(field, "expected a row of full length");
            for (std::size_t j = 0; j < rows.size(); ++j)
                matrix[i].push_back(to_double(rows[i][j], field + "[" + std::to_string(j) + "]"));
        }
        return MetricSpace::from_matrix(std::move(points), matrix);
    }
    bad("metric", "unknown metric '" + metric + "'");
}

json space_to_json(const MetricSpace& space) {
    json out;
    out["kind"] = "finite";
    const auto& pts = space.points();
    const bool embedded = !pts.empty() && std::all_of(pts.begin(), pts.end(), [](const Point& p) {
        return p.coords.has_value();
    });
    if (embedded && space.name() == "euclidean") {
        out["metric"] = "euclidean";
        json points = json::array();
        for (const auto& p : pts) {
            json coords = json::array();
            for (const auto& c : *p.coords) {
                std::ostringstream os;
                os << c;
                coords.push_back(os.str());
            }
            points.push_back({{"id", p.id}, {"coords", coords}});
        }
        out["points"] = points;
        return out;
    }
    out["metric"] = "matrix";
    json ids = json::array();
    for (const auto& p : pts) ids.push_back(p.id);
    out["points"] = ids;
    json rows = json::array();
    for (PointIndex i = 0; i < pts.size(); ++i) {
        json row = json::array();
        for (double d : space.row(i)) row.push_back(d);
        rows.push_back(row);
    }
    out["matrix"] = rows;
    return out;
}

namespace {

FunctionOracle closed_form(const json& descriptor, const MetricSpace& space) {
    const auto form = descriptor.at("form").get<std::string>();
    const auto coordinate = descriptor.value("coordinate", std::size_t{0});
    auto number = [&](const char* key, long long fallback) {
        return descriptor.contains(key) ? parse_rational(descriptor[key], key) : Rational(fallback);
    };
    const Rational scale = number("scale", 1), offset = number("offset", 0);
    const Rational threshold = number("threshold", 0), low = number("low", 0), high = number("high", 1);
    const Rational constant = number("value", 0);

    std::function<Rational(const Rational&)> rule;
    if (form == "coord" || form == "linear") {
        rule = [&](const Rational& v) { return scale * v + offset; };
    } else if (form == "quadratic") {
        rule = [&](const Rational& v) { return scale * v * v + offset; };
    } else if (form == "abs") {
        rule = [&](const Rational& v) { return scale * (v < 0 ? Rational(-v) : v) + offset; };
    } else if (form == "step") {
        rule = [&](const Rational& v) { return v >= threshold ? high : low; };
    } else if (form == "constant") {
        rule = [&](const Rational&) { return constant; };
    } else {
        bad("form", "unknown function '" + form + "'");
    }

    std::vector<ExtReal> values;
    for (const auto& p : space.points()) {
        if (form == "constant") {
            values.push_back(constant.convert_to<double>());
            continue;
        }
        if (!p.coords) throw Error(ErrorKind::NoCoordinates, "form '" + form + "' needs coordinates; " + p.id + " has none");
        if (coordinate >= p.coords->size()) bad("coordinate", "out of range for point " + p.id);
        values.push_back(rule((*p.coords)[coordinate]).convert_to<double>());
    }
    return FunctionOracle(form, std::move(values));
}

}  // namespace

FunctionOracle parse_function(const json& descriptor, const MetricSpace& space) {
    if (!descriptor.is_object()) bad("function", "expected an object");
    if (descriptor.contains("form")) {
        if (!descriptor["form"].is_string()) bad("form", "expected a string");
        return closed_form(descriptor, space);
    }
    const auto& values = require(descriptor, "values", "function");
    const std::string name = descriptor.value("name", std::string("tabulated"));
    std::vector<ExtReal> out(space.size());
    if (values.is_array()) {
        if (values.size() != space.size()) bad("values", "expected one value per point");
        for (std::size_t i = 0; i < values.size(); ++i)
            out[i] = parse_ext_real(values[i], "values[" + std::to_string(i) + "]");
    } else if (values.is_object()) {
        for (const auto& p : space.points())
            if (!values.contains(p.id)) bad("values." + p.id, "missing value for point");
        for (const auto& [id, v] : values.items()) {
            if (!space.contains(id)) bad("values." + id, "no such point in the space");
            out[space.index_of(id)] = parse_ext_real(v, "values." + id);
        }
    } else {
        bad("values", "expected an array or an object keyed by point id");
    }
    return FunctionOracle(name, std::move(out));
}

FunctionOracle named_function(const std::string& form, const MetricSpace& space) {
    return parse_function(json{{"form", form}}, space);
}

json function_to_json(const FunctionOracle& f, const MetricSpace& space) {
    json values = json::object();
    for (PointIndex i = 0; i < f.size(); ++i) values[space.point(i).id] = to_json(f(i));
    return {{"name", f.name()}, {"values", values}};
}

ProblemDescriptor parse_problem(const json& descriptor) {
    if (!descriptor.is_object()) bad("problem", "expected an object");
    ProblemDescriptor out;
    const auto& family = require(descriptor, "family", "problem");
    if (!family.is_string()) bad("family", "expected a string");
    const auto parsed = parse_family(family.get<std::string>());
    if (!parsed) bad("family", "unknown family '" + family.get<std::string>() + "'");
    out.family = *parsed;
    const auto mode = descriptor.value("mode", std::string("sup"));
    if (mode != "sup" && mode != "inf") bad("mode", "expected \"sup\" or \"inf\"");
    out.mode = mode == "sup" ? Mode::sup : Mode::inf;
    if (descriptor.contains("space")) out.space = descriptor["space"];
    if (descriptor.contains("function")) out.function = descriptor["function"];
    if (descriptor.contains("params")) {
        const auto& params = descriptor["params"];
        if (params.contains("bounds")) {
            const auto& b = params["bounds"];
            if (!b.is_array() || b.size() != 2) bad("params.bounds", "expected [lower, upper]");
            out.lower_bound = to_double(b[0], "params.bounds[0]");
            out.upper_bound = to_double(b[1], "params.bounds[1]");
            if (!(out.lower_bound < out.upper_bound)) bad("params.bounds", "lower bound must be below upper bound");
        }
        if (params.contains("density")) {
            if (!params["density"].is_number_unsigned()) bad("params.density", "expected a nonnegative integer");
            out.density = params["density"].get<std::size_t>();
        }
    }
    if (descriptor.contains("seed")) {
        const auto& seed = descriptor["seed"];
        if (!seed.is_array()) bad("seed", "expected an array of point ids");
        for (const auto& id : seed) {
            if (!id.is_string()) bad("seed", "expected point id strings");
            out.seed.push_back(id.get<std::string>());
        }
    }
    if (descriptor.contains("eps")) {
        out.closure.eps = to_double(descriptor["eps"], "eps");
        if (out.closure.eps < 0) bad("eps", "must be nonnegative");
    }
    if (descriptor.contains("cap")) {
        if (!descriptor["cap"].is_number_unsigned() || descriptor["cap"].get<std::size_t>() == 0)
            bad("cap", "expected a positive integer");
        out.closure.cap = descriptor["cap"].get<std::size_t>();
    }
    if (descriptor.contains("max_depth")) {
        if (!descriptor["max_depth"].is_number_unsigned() || descriptor["max_depth"].get<std::size_t>() == 0)
            bad("max_depth", "expected a positive integer");
        out.closure.max_depth = descriptor["max_depth"].get<std::size_t>();
    }
    return out;
}

WitnessProblem build_problem(const ProblemDescriptor& descriptor, std::shared_ptr<const MetricSpace> space,
                             std::shared_ptr<const FunctionOracle> f) {
    auto problem = make_problem(descriptor.family, std::move(space), std::move(f), descriptor.mode);
    if (descriptor.lower_bound > 0.0 || std::isfinite(descriptor.upper_bound)) {
        auto inner = problem.params.truncation;
        problem.params.truncation = [inner, family = descriptor.family, lo = descriptor.lower_bound,
                                     hi = descriptor.upper_bound](PointIndex x) {
            auto params = inner(x);
            std::erase_if(params, [&](const Param& p) {
                const auto entries = param_positive_entries(family, p);
                return std::any_of(entries.begin(), entries.end(), [&](double v) { return v < lo || v > hi; });
            });
            return params;
        };
    }
    return problem;
}

json to_json(const DeterminacyCheck& check, const MetricSpace& space) {
    return {{"x", space.point(check.x).id},
            {"param", check.param},
            {"mode", std::string(to_string(check.mode))},
            {"lhs", to_json(check.lhs)},
            {"rhs", to_json(check.rhs)},
            {"region_hit", check.region_hit},
            {"verdict", std::string(to_string(check.verdict))},
            {"tolerance", check.tolerance}};
}

json to_json(const GeneratedSubspace& generated, const MetricSpace& space) {
    json members = json::array();
    for (PointIndex u : generated.result()) members.push_back(space.point(u).id);
    json provenance = json::array();
    for (const auto& [u, p] : generated.provenance) {
        json witness = json::array();
        for (PointIndex w : p.witness) witness.push_back(space.point(w).id);
        provenance.push_back({{"point", space.point(u).id},
                              {"center", space.point(p.center).id},
                              {"param", p.param},
                              {"witness", witness},
                              {"component", p.component},
                              {"operator", p.problem},
                              {"level", p.level}});
    }
    return {{"levels", generated.level_sizes()},
            {"fixed_point", generated.fixed_point},
            {"members", members},
            {"provenance", provenance}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::BadDescriptor, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::BadDescriptor, "'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace sepdet
