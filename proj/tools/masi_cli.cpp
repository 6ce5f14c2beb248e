#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "masi/format.hpp"
#include "masi/generator_algebra.hpp"
#include "masi/io.hpp"
#include "masi/loewner_certifier.hpp"
#include "masi/matrix_core.hpp"
#include "masi/selftest.hpp"
#include "masi/skew_information.hpp"

namespace {

// Exit codes: 0 success/certified, 1 self-test failure, 2 input/validation,
// 3 certification rejection, 4 domain error.
constexpr int kExitOk = 0;
constexpr int kExitSelftestFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRejected = 3;
constexpr int kExitDomain = 4;

masi::GeneratorFunction parse_generator(const std::string& spec) {
    if (spec == "exotic") return masi::builtin_exotic();
    if (spec == "sld") return masi::builtin_bridge(0.0);
    if (spec == "rld") return masi::builtin_bridge(1.0);
    if (spec == "wy") return masi::builtin_power(0.5);
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string family = spec.substr(0, colon);
        const std::string arg = spec.substr(colon + 1);
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(arg, &used);
            if (used != arg.size()) throw std::invalid_argument(arg);
        } catch (const std::exception&) {
            throw masi::validation_error("generator spec '" + spec +
                                         "': cannot parse parameter '" + arg + "'");
        }
        if (family == "power") return masi::builtin_power(value);
        if (family == "bridge") return masi::builtin_bridge(value);
    }
    throw masi::validation_error(
        "unknown generator '" + spec +
        "'; expected power:<p>, bridge:<alpha>, exotic, or an alias (sld, rld, wy)");
}

void emit(const masi::json& doc, const std::string& format, const std::string& out_path) {
    std::string text;
    if (format == "csv") {
        text = masi::json_to_csv(doc);
    } else {
        text = doc.dump(2);
        text += "\n";
    }
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw masi::validation_error("cannot write to '" + out_path + "'");
        out << text;
    }
}

std::vector<double> parse_t_values(const std::string& t_list, const std::string& grid_spec) {
    std::vector<double> ts;
    if (!t_list.empty()) {
        std::stringstream ss(t_list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                ts.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw masi::validation_error("--t: cannot parse '" + item + "'");
            }
        }
    } else if (!grid_spec.empty()) {
        double lo = 0.0, hi = 0.0;
        int count = 0;
        char c1 = 0, c2 = 0;
        std::stringstream ss(grid_spec);
        if (!(ss >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 2 ||
            !(lo > 0.0) || !(hi > lo)) {
            throw masi::validation_error("--grid: expected <lo>:<hi>:<count> with 0 < lo < hi");
        }
        for (int i = 0; i < count; ++i) {
            ts.push_back(std::pow(10.0, std::log10(lo) +
                                            (std::log10(hi) - std::log10(lo)) * i /
                                                (count - 1)));
        }
    } else {
        ts.assign(masi::sample_grid().begin(), masi::sample_grid().end());
    }
    return ts;
}

struct EvalArgs {
    std::string generator;
    std::string what = "f";
    std::string t_list;
    std::string grid;
    double y = 1.0;
    std::string format = "json";
    std::string out;
};

int run_eval(const EvalArgs& args) {
    const masi::GeneratorFunction h = parse_generator(args.generator);

    std::function<double(double)> fn;
    if (args.what == "h") {
        fn = [h](double t) { return h(t); };
    } else if (args.what == "sharp") {
        const auto s = masi::sharp(h);
        fn = [s](double t) { return s(t); };
    } else if (args.what == "star") {
        const auto s = masi::star(h);
        fn = [s](double t) { return s(t); };
    } else if (args.what == "tilde") {
        const auto s = masi::tilde(h);
        fn = [s](double t) { return s(t); };
    } else if (args.what == "g") {
        const auto g = masi::g_auxiliary(h);
        fn = [g](double t) { return g(t); };
    } else if (args.what == "f" || args.what == "f-raw") {
        const auto f = masi::construct_f(h, args.what == "f");
        fn = [f](double t) { return f(t); };
    } else if (args.what == "c" || args.what == "chat") {
        const masi::MorozovaCencov mc(masi::construct_f(h, true));
        const double y = args.y;
        if (args.what == "c") {
            fn = [mc, y](double t) { return mc.c(t, y); };
        } else {
            fn = [mc, y](double t) { return mc.c_hat(t, y); };
        }
    } else {
        throw masi::validation_error("--what: unknown quantity '" + args.what + "'");
    }

    const std::vector<double> ts = parse_t_values(args.t_list, args.grid);
    masi::json rows = masi::json::array();
    bool any_error = false;
    for (double t : ts) {
        masi::json row;
        row["t"] = t;
        try {
            row["value"] = fn(t);
        } catch (const std::exception& e) {
            row["error"] = e.what();
            any_error = true;
        }
        rows.push_back(std::move(row));
    }

    if (args.format == "csv") {
        std::ostringstream table;
        table << "t," << args.what << "\n";
        for (const auto& row : rows) {
            table << masi::format_double(row["t"].get<double>()) << ",";
            if (row.contains("value")) {
                table << masi::format_double(row["value"].get<double>());
            } else {
                table << "error: " << row["error"].get<std::string>();
            }
            table << "\n";
        }
        if (args.out.empty()) {
            std::cout << table.str();
        } else {
            std::ofstream out(args.out);
            if (!out) throw masi::validation_error("cannot write to '" + args.out + "'");
            out << table.str();
        }
    } else {
        masi::json doc;
        doc["generator"] = h.name();
        doc["what"] = args.what;
        doc["rows"] = std::move(rows);
        emit(doc, args.format, args.out);
    }
    return any_error ? kExitDomain : kExitOk;
}

struct CertifyArgs {
    std::string generator;
    std::string function;
    std::string target = "constructed-f";
    std::string check = "monotone";
    int order = 6;
    int trials = 200;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string out;
};

int run_certify(const CertifyArgs& args) {
    std::function<double(double)> fn;
    std::string target_name;

    if (!args.function.empty()) {
        if (args.function == "square") {
            fn = [](double t) { return t * t; };
        } else if (args.function == "cube") {
            fn = [](double t) { return t * t * t; };
        } else if (args.function == "exp") {
            fn = [](double t) { return std::exp(t); };
        } else if (args.function == "sqrt") {
            fn = [](double t) { return std::sqrt(t); };
        } else if (args.function == "log1p") {
            fn = [](double t) { return std::log1p(t); };
        } else {
            throw masi::validation_error("--function: unknown function '" + args.function +
                                         "' (square, cube, exp, sqrt, log1p)");
        }
        target_name = args.function;
    } else if (!args.generator.empty()) {
        const masi::GeneratorFunction h = parse_generator(args.generator);
        if (args.target == "h") {
            fn = [h](double t) { return h(t); };
            target_name = h.name();
        } else if (args.target == "constructed-f" || args.target == "constructed-f-raw") {
            const auto f = masi::construct_f(h, args.target == "constructed-f");
            fn = [f](double t) { return f(t); };
            target_name = f.base().name();
        } else {
            throw masi::validation_error("--target: expected constructed-f, "
                                         "constructed-f-raw, or h");
        }
    } else {
        throw masi::validation_error("certify: provide --generator or --function");
    }

    masi::CertificationReport report;
    if (args.check == "monotone") {
        report = masi::certify_operator_monotone(fn, args.order, args.trials, args.seed);
    } else if (args.check == "convex") {
        report = masi::certify_operator_convex(fn, args.order, args.trials, args.seed);
    } else {
        throw masi::validation_error("--check: expected monotone or convex");
    }
    emit(masi::report_to_json(report, target_name), args.format, args.out);
    return report.verdict == masi::Verdict::rejected ? kExitRejected : kExitOk;
}

struct SkewArgs {
    std::string generator;
    std::string method = "spectral";
    std::string state_path;
    std::string observable_path;
    std::optional<double> p;
    std::optional<double> alpha;
    std::string format = "json";
    std::string out;
};

std::pair<masi::DensityMatrix, masi::HermitianMatrix> load_instance(
    const std::string& state_path, const std::string& observable_path) {
    auto state = masi::parse_matrix_file(state_path);
    if (!std::holds_alternative<masi::DensityMatrix>(state)) {
        throw masi::validation_error("'" + state_path + "' does not hold a state");
    }
    auto obs = masi::parse_matrix_file(observable_path);
    const masi::HermitianMatrix a = std::holds_alternative<masi::HermitianMatrix>(obs)
                                        ? std::get<masi::HermitianMatrix>(obs)
                                        : std::get<masi::DensityMatrix>(obs).base();
    return {std::get<masi::DensityMatrix>(state), a};
}

int run_skewinfo(const SkewArgs& args) {
    const auto [rho, a] = load_instance(args.state_path, args.observable_path);

    std::optional<masi::GeneratorFunction> h;
    if (!args.generator.empty()) h = parse_generator(args.generator);

    auto power_p = [&]() -> double {
        if (args.p) return *args.p;
        if (h && h->name().rfind("power:", 0) == 0) return std::stod(h->name().substr(6));
        throw masi::validation_error("method needs --p or a power:<p> generator");
    };

    auto compute = [&](const std::string& method) -> masi::SkewInfoReport {
        if (method == "spectral") {
            if (!h) throw masi::validation_error("--method spectral needs --generator");
            return masi::masi_spectral(masi::MorozovaCencov(masi::construct_f(*h, true)),
                                       rho, a);
        }
        if (method == "modular") {
            if (!h) throw masi::validation_error("--method modular needs --generator");
            return masi::masi_modular(*h, rho, a);
        }
        if (method == "commutator") {
            return masi::wyd_commutator(rho, a, power_p());
        }
        if (method == "unbounded") {
            if (!h) throw masi::validation_error("--method unbounded needs --generator");
            return masi::unbounded_masi(*h, rho, a);
        }
        if (method == "bridge") {
            if (!args.alpha) throw masi::validation_error("--method bridge needs --alpha");
            return masi::bridge_skew_info(*args.alpha, rho, a);
        }
        throw masi::validation_error("--method: unknown method '" + method + "'");
    };

    if (args.method != "all") {
        emit(masi::report_to_json(compute(args.method)), args.format, args.out);
        return kExitOk;
    }

    // method=all: run the mutually validating routes and report deviations.
    std::vector<std::string> methods = {"spectral", "modular"};
    if (args.p || (h && h->name().rfind("power:", 0) == 0)) {
        const double p = power_p();
        if (p > 0.0 && p < 1.0) methods.push_back("commutator");
    }
    masi::json reports = masi::json::array();
    std::vector<std::pair<std::string, double>> values;
    for (const auto& method : methods) {
        const masi::SkewInfoReport r = compute(method);
        values.emplace_back(method, r.value);
        reports.push_back(masi::report_to_json(r));
    }
    masi::json doc;
    doc["reports"] = std::move(reports);
    masi::json pairwise;
    double max_dev = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            const double dev = std::abs(values[i].second - values[j].second);
            pairwise[values[i].first + "_vs_" + values[j].first] = dev;
            max_dev = std::max(max_dev, dev);
        }
    }
    doc["pairwise_deviations"] = std::move(pairwise);
    doc["max_pairwise_deviation"] = max_dev;
    emit(doc, args.format, args.out);
    return kExitOk;
}

int run_selftest(int tamper) {
    const auto start = std::chrono::steady_clock::now();
    masi::selftest::Options options;
    options.tamper_criterion = tamper;
    const auto results = masi::selftest::run_acceptance(options);
    const bool all_passed = masi::selftest::print_results(results, std::cout);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < 60.0;
    std::cout << (all_passed && in_time ? "PASS" : "FAIL")
              << "  criterion 10: deterministic self-test run within the time budget\n";
    std::cerr << "selftest wall time: " << masi::format_double(seconds) << " s\n";
    return (all_passed && in_time) ? kExitOk : kExitSelftestFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metric adjusted skew information toolkit: constructs metric functions "
                 "from operator monotone generators, certifies monotonicity numerically, "
                 "and evaluates the associated information measures."};
    app.require_subcommand(1);

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Tabulate h, its transforms, f, c or c-hat");
    eval->add_option("--generator", eval_args.generator, "power:<p> | bridge:<alpha> | exotic")
        ->required();
    eval->add_option("--what", eval_args.what, "h|sharp|star|tilde|g|f|f-raw|c|chat");
    eval->add_option("--t", eval_args.t_list, "comma-separated evaluation points");
    eval->add_option("--grid", eval_args.grid, "log grid <lo>:<hi>:<count>");
    eval->add_option("--y", eval_args.y, "second kernel argument for c/chat (default 1)");
    eval->add_option("--format", eval_args.format, "json|csv");
    eval->add_option("--out", eval_args.out, "output path (default stdout)");

    CertifyArgs certify_args;
    auto* certify = app.add_subcommand("certify", "Loewner/midpoint certification runs");
    certify->add_option("--generator", certify_args.generator, "generator spec");
    certify->add_option("--function", certify_args.function,
                        "catalog function: square|cube|exp|sqrt|log1p");
    certify->add_option("--target", certify_args.target,
                        "constructed-f|constructed-f-raw|h");
    certify->add_option("--check", certify_args.check, "monotone|convex");
    certify->add_option("--order", certify_args.order, "max point-set size / matrix dim");
    certify->add_option("--trials", certify_args.trials, "trials per size");
    certify->add_option("--seed", certify_args.seed, "PRNG seed");
    certify->add_option("--format", certify_args.format, "json|csv");
    certify->add_option("--out", certify_args.out, "output path");

    SkewArgs skew_args;
    auto* skew = app.add_subcommand("skewinfo", "Skew information of a state/observable pair");
    skew->add_option("--generator", skew_args.generator, "generator spec");
    skew->add_option("--method", skew_args.method,
                     "spectral|modular|commutator|unbounded|bridge|all");
    skew->add_option("--state", skew_args.state_path, "state JSON file")->required();
    skew->add_option("--observable", skew_args.observable_path, "observable JSON file")
        ->required();
    double p_value = 0.0, alpha_value = 0.0;
    auto* p_opt = skew->add_option("--p", p_value, "WYD exponent for --method commutator");
    auto* alpha_opt = skew->add_option("--alpha", alpha_value, "bridge parameter");
    skew->add_option("--format", skew_args.format, "json|csv");
    skew->add_option("--out", skew_args.out, "output path");

    double bridge_alpha = 0.5;
    std::string bridge_state, bridge_observable, bridge_format = "json", bridge_out;
    auto* bridge = app.add_subcommand("bridge", "Bridge-family skew information");
    bridge->add_option("--alpha", bridge_alpha, "bridge parameter in [0,1]")->required();
    bridge->add_option("--state", bridge_state, "state JSON file")->required();
    bridge->add_option("--observable", bridge_observable, "observable JSON file")->required();
    bridge->add_option("--format", bridge_format, "json|csv");
    bridge->add_option("--out", bridge_out, "output path");

    int tamper = 0;
    auto* selftest = app.add_subcommand("selftest", "Run the acceptance checks");
    selftest->add_option("--tamper", tamper,
                         "test hook: force criterion N against an unsatisfiable tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (eval->parsed()) return run_eval(eval_args);
        if (certify->parsed()) return run_certify(certify_args);
        if (skew->parsed()) {
            if (*p_opt) skew_args.p = p_value;
            if (*alpha_opt) skew_args.alpha = alpha_value;
            return run_skewinfo(skew_args);
        }
        if (bridge->parsed()) {
            const auto [rho, a] = load_instance(bridge_state, bridge_observable);
            const masi::SkewInfoReport report = masi::bridge_skew_info(bridge_alpha, rho, a);
            emit(masi::report_to_json(report), bridge_format, bridge_out);
            return kExitOk;
        }
        if (selftest->parsed()) return run_selftest(tamper);
    } catch (const masi::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const masi::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const masi::numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
