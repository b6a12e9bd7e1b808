#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sepdet/descriptors.hpp"
#include "sepdet/error.hpp"
#include "sepdet/harness.hpp"
#include "sepdet/problems.hpp"
#include "sepdet/rich_families.hpp"

using namespace sepdet;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

struct Options {
    std::string space;
    std::string fn;
    std::vector<std::string> x;
    std::string param;
    std::string problem = "ball-pairs";
    std::string mode = "sup";
    double eps = 0.0;
    std::size_t cap = 1;
    std::size_t depth = 256;
    std::size_t q_density = 4;
    std::uint64_t seed = 1;
    std::string out;
    std::string name;
    std::size_t n = 0;
    std::size_t instances = 0;
};

struct Loaded {
    std::shared_ptr<const MetricSpace> space;
    std::shared_ptr<const FunctionOracle> f;
    ProblemDescriptor problem;
};

bool is_file(const std::string& path) { return !path.empty() && std::filesystem::is_regular_file(path); }

std::shared_ptr<const MetricSpace> load_space(const Options& o, const std::optional<json>& embedded) {
    if (!o.space.empty()) return std::make_shared<const MetricSpace>(parse_space(load_json_file(o.space)));
    if (embedded) return std::make_shared<const MetricSpace>(parse_space(*embedded));
    throw Error(ErrorKind::BadDescriptor, "field 'space': no space given (use --space)");
}

std::shared_ptr<const FunctionOracle> load_function(const Options& o, const MetricSpace& space,
                                                    const std::optional<json>& embedded) {
    if (!o.fn.empty()) {
        if (is_file(o.fn)) return std::make_shared<const FunctionOracle>(parse_function(load_json_file(o.fn), space));
        return std::make_shared<const FunctionOracle>(named_function(o.fn, space));
    }
    if (embedded) return std::make_shared<const FunctionOracle>(parse_function(*embedded, space));
    throw Error(ErrorKind::BadDescriptor, "field 'function': no function given (use --fn)");
}

Loaded load(const Options& o) {
    ProblemDescriptor problem;
    if (is_file(o.problem)) {
        problem = parse_problem(load_json_file(o.problem));
    } else {
        const auto family = parse_family(o.problem);
        if (!family) throw Error(ErrorKind::BadDescriptor, "field 'problem': unknown family '" + o.problem + "'");
        problem.family = *family;
        if (o.mode != "sup" && o.mode != "inf") throw Error(ErrorKind::BadDescriptor, "field 'mode': expected sup or inf");
        problem.mode = o.mode == "sup" ? Mode::sup : Mode::inf;
        problem.closure = ClosureConfig{o.eps, o.cap, o.depth};
    }
    Loaded out;
    out.space = load_space(o, problem.space);
    out.f = load_function(o, *out.space, problem.function);
    out.problem = std::move(problem);
    return out;
}

PointSet seed_set(const Options& o, const Loaded& in) {
    std::vector<std::string> ids = o.x.empty() ? in.problem.seed : o.x;
    if (ids.empty()) ids.push_back(in.space->point(0).id);
    std::vector<PointIndex> members;
    for (const auto& id : ids) members.push_back(in.space->index_of(id));
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return PointSet(in.space->size(), members);
}

PointIndex center(const Options& o, const MetricSpace& space) {
    if (o.x.empty()) throw Error(ErrorKind::BadDescriptor, "field 'x': a center is required (use --x)");
    return space.index_of(o.x.front());
}

Param parse_param(const std::string& text) {
    Param out;
    std::stringstream in(text);
    std::string piece;
    while (std::getline(in, piece, ',')) out.push_back(parse_ext_real(json(piece), "param").value());
    if (out.empty()) throw Error(ErrorKind::BadDescriptor, "field 'param': empty parameter");
    return out;
}

void emit(const Options& o, const json& report) {
    const std::string text = report.dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(o.out);
    if (!file) throw Error(ErrorKind::BadDescriptor, "field 'out': cannot write '" + o.out + "'");
    file << text;
}

int reduce(const Options& o) {
    const auto in = load(o);
    const auto problem = build_problem(in.problem, in.space, in.f);
    const auto generated = closure_iterate(problem, seed_set(o, in), in.problem.closure);
    json report = to_json(generated, *in.space);
    report["problem"] = std::string(to_string(in.problem.family));
    report["mode"] = std::string(to_string(problem.mode));
    emit(o, report);
    return kOk;
}

int check(const Options& o) {
    const auto in = load(o);
    const auto problem = build_problem(in.problem, in.space, in.f);
    const auto generated = closure_iterate(problem, seed_set(o, in), in.problem.closure);
    const PointSet& y = generated.result();
    std::vector<DeterminacyCheck> checks;
    if (!o.param.empty()) {
        checks.push_back(check_reduction(problem, y, center(o, *in.space), parse_param(o.param)));
    } else {
        std::mt19937_64 rng(o.seed);
        checks = check_all(problem, y, 0.0, [&](PointIndex x) {
            std::vector<Param> extra;
            for (std::size_t i = 0; i < o.q_density; ++i) extra.push_back(problem.params.sample(rng, x));
            return extra;
        });
    }
    json records = json::array();
    bool failed = false;
    for (const auto& c : checks) {
        records.push_back(to_json(c, *in.space));
        failed = failed || c.verdict == Verdict::fail || !c.monotone;
    }
    emit(o, {{"checks", records}, {"levels", generated.level_sizes()}, {"fixed_point", generated.fixed_point}});
    return failed ? kCheckFailed : kOk;
}

/// Full-space value against the value restricted to the closure of {x} under `problem`.
int compare_restricted(const Options& o, const Loaded& in, const WitnessProblem& problem, const char* quantity,
                       const std::function<ExtReal(PointIndex, const PointSet*)>& value) {
    const PointIndex x = center(o, *in.space);
    const auto generated = closure_iterate(problem, PointSet(in.space->size(), {x}), ClosureConfig{o.eps, o.cap, o.depth});
    const ExtReal full = value(x, nullptr);
    const ExtReal restricted = value(x, &generated.result());
    json members = json::array();
    for (PointIndex u : generated.result()) members.push_back(in.space->point(u).id);
    emit(o, {{"x", in.space->point(x).id},
             {quantity, to_json(full)},
             {"restricted", to_json(restricted)},
             {"subspace", members},
             {"equal", full == restricted}});
    return full == restricted ? kOk : kCheckFailed;
}

int slope(const Options& o) {
    Options local = o;
    local.problem = "torus-slope";
    const auto in = load(local);
    const auto problem = torus_problem(in.space, in.f);
    return compare_restricted(o, in, problem, "slope", [&](PointIndex x, const PointSet* within) {
        return slope_at(*in.f, *in.space, x, ScaleGrid::realizing(*in.space, x), within);
    });
}

int lip(const Options& o) {
    Options local = o;
    local.problem = "ball-pairs";
    const auto in = load(local);
    const auto problem = ball_pair_problem(in.space, in.f);
    if (!o.param.empty()) {
        const double r = parse_param(o.param).front();
        return compare_restricted(o, in, problem, "lip_local_sup", [&](PointIndex x, const PointSet* within) {
            return lip_local_sup(*in.f, *in.space, x, r, within).value;
        });
    }
    return compare_restricted(o, in, problem, "lip", [&](PointIndex x, const PointSet* within) {
        return lip_modulus(*in.f, *in.space, x, ScaleGrid::realizing(*in.space, x), within);
    });
}

int suite(const Options& o, const CLI::App& command) {
    if (o.name.empty()) throw Error(ErrorKind::BadDescriptor, "field 'name': a suite name is required (use --name)");
    SuiteConfig config = default_config(o.name);
    config.seed = o.seed;
    if (o.instances > 0) config.instances = o.instances;
    if (o.n > 0) config.n_min = config.n_max = o.n;
    if (command.count("--q-density")) config.q_density = o.q_density;
    if (command.count("--eps")) config.closure.eps = o.eps;
    if (command.count("--cap")) config.closure.cap = o.cap;
    if (command.count("--depth")) config.closure.max_depth = o.depth;
    const auto report = run_suite(o.name, config);
    std::cerr << summary_table(report);
    emit(o, to_json(report));
    return report.all_passed() ? kOk : kCheckFailed;
}

int validate(const Options& o) {
    const auto space = load_space(o, std::nullopt);
    json report = {{"space", "ok"}, {"points", space->size()}, {"diameter", space->diameter()}};
    if (!o.fn.empty()) {
        const auto f = load_function(o, *space, std::nullopt);
        report["function"] = f->name();
        report["proper"] = f->is_proper();
    }
    emit(o, report);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Separable reduction: witness closures and exact determinacy checks on finite metric spaces"};
    app.require_subcommand(1, 1);
    Options o;

    auto add_inputs = [&](CLI::App* cmd) {
        cmd->add_option("--space", o.space, "space descriptor (JSON file)");
        cmd->add_option("--fn", o.fn, "function descriptor (JSON file) or form: coord, linear, quadratic, abs, step, constant");
    };
    auto add_closure = [&](CLI::App* cmd) {
        cmd->add_option("--problem", o.problem, "family (ball-pairs, torus-slope, punctured-ball) or problem descriptor file");
        cmd->add_option("--mode", o.mode, "sup or inf");
        cmd->add_option("--eps", o.eps, "witness optimality slack")->check(CLI::NonNegativeNumber);
        cmd->add_option("--cap", o.cap, "witnesses kept per (x, p)")->check(CLI::PositiveNumber);
        cmd->add_option("--depth", o.depth, "maximal number of closure rounds")->check(CLI::PositiveNumber);
    };

    auto* reduce_cmd = app.add_subcommand("reduce", "run the witness closure from seed points");
    add_inputs(reduce_cmd);
    add_closure(reduce_cmd);
    reduce_cmd->add_option("--x", o.x, "seed point ids");
    reduce_cmd->add_option("--out", o.out, "report path (stdout when omitted)");

    auto* check_cmd = app.add_subcommand("check", "closure from the seed, then full vs restricted optima");
    add_inputs(check_cmd);
    add_closure(check_cmd);
    check_cmd->add_option("--x", o.x, "seed point ids; the first is the center for --param");
    check_cmd->add_option("--param", o.param, "one parameter, comma separated (for example 2,0.5,3.5)");
    check_cmd->add_option("--q-density", o.q_density, "random parameters per center besides the truncation");
    check_cmd->add_option("--seed", o.seed, "random seed for sampled parameters");
    check_cmd->add_option("--out", o.out, "report path");

    auto* slope_cmd = app.add_subcommand("slope", "slope at a point, full and restricted");
    add_inputs(slope_cmd);
    slope_cmd->add_option("--x", o.x, "point id")->required();
    slope_cmd->add_option("--out", o.out, "report path");

    auto* lip_cmd = app.add_subcommand("lip", "Lipschitz modulus at a point, full and restricted");
    add_inputs(lip_cmd);
    lip_cmd->add_option("--x", o.x, "point id")->required();
    lip_cmd->add_option("--param", o.param, "a radius: report the local sup over that ball instead");
    lip_cmd->add_option("--out", o.out, "report path");

    auto* suite_cmd = app.add_subcommand("suite", "run a property suite");
    suite_cmd->add_option("--name", o.name, "suite name or numbered alias");
    suite_cmd->add_option("--n", o.n, "points per random space")->check(CLI::PositiveNumber);
    suite_cmd->add_option("--instances", o.instances, "number of random instances")->check(CLI::PositiveNumber);
    suite_cmd->add_option("--seed", o.seed, "base seed");
    suite_cmd->add_option("--q-density", o.q_density, "random parameters per center besides the truncation");
    suite_cmd->add_option("--eps", o.eps, "witness optimality slack")->check(CLI::NonNegativeNumber);
    suite_cmd->add_option("--cap", o.cap, "witnesses kept per (x, p)")->check(CLI::PositiveNumber);
    suite_cmd->add_option("--depth", o.depth, "maximal number of closure rounds")->check(CLI::PositiveNumber);
    suite_cmd->add_option("--out", o.out, "report path");

    auto* validate_cmd = app.add_subcommand("validate", "check a space (and optionally a function) descriptor");
    add_inputs(validate_cmd);
    validate_cmd->add_option("--out", o.out, "report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*reduce_cmd) return reduce(o);
        if (*check_cmd) return check(o);
        if (*slope_cmd) return slope(o);
        if (*lip_cmd) return lip(o);
        if (*suite_cmd) return suite(o, *suite_cmd);
        return validate(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: BadDescriptor: " << e.what() << '\n';
        return kInputError;
    }
}
