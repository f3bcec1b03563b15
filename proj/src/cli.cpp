#include "lmnet/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lmnet/pipeline.hpp"
#include "lmnet/textio.hpp"

namespace lmnet {

namespace {

struct CliState {
    RunConfig cfg;
    std::string mode = damping_mode_name(LmConfig{}.mode);
    std::vector<double> split_fractions;
    bool no_stratify = false;
    std::vector<std::string> features;
    std::string label;
    std::string config_path;
};

void add_threshold(CLI::App& sub, CliState& s) {
    sub.add_option("--threshold", s.cfg.threshold, "decision threshold on the network output")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
}

void add_out_dir(CLI::App& sub, CliState& s) {
    sub.add_option("--out-dir", s.cfg.out_dir, "directory for generated artifacts")
        ->capture_default_str();
}

void add_config(CLI::App& sub, CliState& s) {
    sub.add_option("--config", s.config_path,
                   "key = value file with defaults; command-line flags override");
}

/// Applies `key = value` lines to options of `sub` that were not given on the
/// command line. CLI11 only routes config files through the top-level app, so
/// the merge happens here, reusing each option's own conversion and checks.
void apply_config_file(CLI::App& sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file: cannot open '" + path + "'");

    std::set<std::string> seen;
    std::vector<CLI::Option*> pending;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(strip_cr(line));
        if (text.empty() || text[0] == '#') continue;
        const auto at = "config file line " + std::to_string(lineno) + ": ";

        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError(at + "expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) throw ConfigError(at + "empty key");
        if (!seen.insert(key).second) throw ConfigError(at + "duplicate key '" + key + "'");

        CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw("--" + key);
        if (opt == nullptr) throw ConfigError(at + "unknown key '" + key + "'");
        if (opt->count() > 0) continue;  // the flag was given explicitly and wins
        opt->add_result(value);
        pending.push_back(opt);
    }

    try {
        for (CLI::Option* opt : pending) opt->run_callback();
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
}

void require_value(const std::string& value, const std::string& flag) {
    if (value.empty()) throw ConfigError(flag + " is required (flag or config file)");
}

CLI::App* add_train(CLI::App& app, CliState& s) {
    CLI::App* sub = app.add_subcommand("train", "fit a network on a labelled CSV");
    sub->add_option("--data", s.cfg.data_path, "training CSV with header row");
    sub->add_option("--model", s.cfg.model_path,
                    "model output path (default: <out-dir>/model.txt)");
    add_out_dir(*sub, s);
    add_threshold(*sub, s);
    sub->add_option("--seed", s.cfg.seed, "seed for the split and the weight init")
        ->capture_default_str();
    sub->add_option("--hidden", s.cfg.hidden, "comma-separated hidden layer sizes")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--mode", s.mode, "damping matrix: identity or diagonal")
        ->check(CLI::IsMember({"identity", "diagonal"}))
        ->capture_default_str();
    sub->add_option("--lambda0", s.cfg.lm.lambda0, "initial damping factor")
        ->capture_default_str();
    sub->add_option("--max-iters", s.cfg.lm.max_iterations, "proposal budget")
        ->capture_default_str();
    sub->add_option("--split", s.split_fractions,
                    "train,val,test fractions (default 0.7,0.15,0.15)")
        ->delimiter(',')
        ->expected(3);
    sub->add_flag("--no-stratify", s.no_stratify, "split without per-class stratification");
    sub->add_option("--features", s.features,
                    "comma-separated feature column names (default: clinical-records schema)")
        ->delimiter(',');
    sub->add_option("--label", s.label, "label column name")->capture_default_str();
    sub->add_option("--lambda-increase", s.cfg.lm.lambda_increase,
                    "damping multiplier on rejection")
        ->capture_default_str();
    sub->add_option("--lambda-decrease", s.cfg.lm.lambda_decrease,
                    "damping divisor on acceptance")
        ->capture_default_str();
    sub->add_option("--lambda-min", s.cfg.lm.lambda_min, "lower damping clamp")
        ->capture_default_str();
    sub->add_option("--lambda-max", s.cfg.lm.lambda_max, "upper damping clamp")
        ->capture_default_str();
    sub->add_option("--gradient-tol", s.cfg.lm.gradient_tol,
                    "stop when the gradient max-norm falls below this")
        ->capture_default_str();
    sub->add_option("--step-tol", s.cfg.lm.step_tol,
                    "stop when the relative step length falls below this")
        ->capture_default_str();
    sub->add_option("--sse-tol", s.cfg.lm.sse_tol, "stop when the error sum reaches this")
        ->capture_default_str();
    add_config(*sub, s);
    return sub;
}

CLI::App* add_evaluate(CLI::App& app, CliState& s) {
    CLI::App* sub = app.add_subcommand("evaluate", "score a labelled CSV against a saved model");
    sub->add_option("--data", s.cfg.data_path, "labelled CSV with header row");
    sub->add_option("--model", s.cfg.model_path, "saved model file");
    add_out_dir(*sub, s);
    add_threshold(*sub, s);
    add_config(*sub, s);
    return sub;
}

CLI::App* add_predict(CLI::App& app, CliState& s) {
    CLI::App* sub = app.add_subcommand("predict", "score an unlabelled CSV against a saved model");
    sub->add_option("--data", s.cfg.data_path, "feature CSV with header row (label optional)");
    sub->add_option("--model", s.cfg.model_path, "saved model file");
    add_out_dir(*sub, s);
    add_threshold(*sub, s);
    add_config(*sub, s);
    return sub;
}

CLI::App* add_monitor(CLI::App& app, CliState& s) {
    CLI::App* sub =
        app.add_subcommand("monitor", "score headerless feature rows from standard input");
    sub->add_option("--model", s.cfg.model_path, "saved model file");
    add_threshold(*sub, s);
    add_config(*sub, s);
    return sub;
}

void finish_train_config(CliState& s) {
    s.cfg.lm.mode = damping_mode_from_name(s.mode);
    if (!s.split_fractions.empty()) {
        s.cfg.split.train_fraction = s.split_fractions[0];
        s.cfg.split.val_fraction = s.split_fractions[1];
        s.cfg.split.test_fraction = s.split_fractions[2];
    }
    s.cfg.split.stratified = !s.no_stratify;
    if (!s.features.empty()) s.cfg.schema.feature_columns = s.features;
    if (!s.label.empty()) s.cfg.schema.label_column = s.label;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Levenberg-Marquardt trainer for clinical record classification"};
    app.name("lmnet");
    app.require_subcommand(1);

    CliState s;
    CLI::App* train = add_train(app, s);
    CLI::App* evaluate = add_evaluate(app, s);
    CLI::App* predict = add_predict(app, s);
    CLI::App* monitor = add_monitor(app, s);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);  // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (train->parsed()) {
            if (!s.config_path.empty()) apply_config_file(*train, s.config_path);
            require_value(s.cfg.data_path, "--data");
            finish_train_config(s);
            cmd_train(s.cfg, out);
        } else if (evaluate->parsed()) {
            if (!s.config_path.empty()) apply_config_file(*evaluate, s.config_path);
            require_value(s.cfg.data_path, "--data");
            require_value(s.cfg.model_path, "--model");
            cmd_evaluate(s.cfg, out);
        } else if (predict->parsed()) {
            if (!s.config_path.empty()) apply_config_file(*predict, s.config_path);
            require_value(s.cfg.data_path, "--data");
            require_value(s.cfg.model_path, "--model");
            cmd_predict(s.cfg, out);
        } else if (monitor->parsed()) {
            if (!s.config_path.empty()) apply_config_file(*monitor, s.config_path);
            require_value(s.cfg.model_path, "--model");
            return cmd_monitor(s.cfg.model_path, s.cfg.threshold, in, out, err);
        }
        return 0;
    } catch (const NonFiniteObjectiveError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ModelLoadError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc) - 1 : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(std::move(args), std::cin, std::cout, std::cerr);
}

}  // namespace lmnet
