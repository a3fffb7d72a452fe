#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tripnet/data/clean.hpp"
#include "tripnet/data/dataset.hpp"
#include "tripnet/data/synth.hpp"
#include "tripnet/error.hpp"
#include "tripnet/eval/mape.hpp"
#include "tripnet/io/atomic_file.hpp"
#include "tripnet/nn/network.hpp"
#include "tripnet/numerics/kernels.hpp"
#include "tripnet/numerics/rng.hpp"
#include "tripnet/store/model_io.hpp"
#include "tripnet/train/train.hpp"
#include "tripnet/tune/grid.hpp"

namespace tripnet::cli {
namespace {

namespace fs = std::filesystem;

// derive_seed label for the train/val/test split.
constexpr std::uint64_t kSplitStream = 21;

struct GenDataArgs {
    std::size_t rows = 0;
    std::uint64_t seed = 1;
    double noise = 0.02;
    std::string out;
    bool show_truth = false;
};

struct TrainArgs {
    std::string data;
    std::string target;
    std::size_t batch = 20;
    std::size_t epochs = 5;
    double lr = 0.001;
    std::uint64_t seed = 1;
    std::string split = "0.7,0.2,0.1";
    std::string scale_mode = "train";
    std::string model_out;
    std::string curve_out;
    std::string test_out;
    std::string clean_report_out;
    bool timestamp = false;
};

struct TuneArgs {
    std::string data;
    std::string target;
    std::string grid = "batch=10,20,40;epochs=5,10,20";
    std::size_t folds = 5;
    std::uint64_t seed = 1;
    double lr = 0.001;
    std::size_t threads = 1;
};

struct EvaluateArgs {
    std::string model;
    std::string data;
    std::string zero_policy = "error";
    std::string pairs_out;
};

struct PredictArgs {
    std::string model;
    std::string input;
    std::string out;
};

data::Target require_target(const std::string& name) {
    const auto t = data::parse_target(name);
    if (!t) {
        throw ArgumentError("unknown target '" + name + "' (expected person_trips or vehicle_trips)");
    }
    return *t;
}

void warn_ignored(const data::CleanReport& report, std::ostream& err) {
    if (report.ignored_columns.empty()) return;
    err << "warning: ignoring columns outside the schema:";
    for (const auto& c : report.ignored_columns) err << ' ' << c;
    err << '\n';
}

data::CleanResult load_clean(const std::string& path, const data::FeatureSchema& schema,
                             data::CleanScope scope, std::ostream& out, std::ostream& err) {
    const auto raw = data::read_csv(path);
    auto cleaned = data::clean(raw, schema, scope);
    warn_ignored(cleaned.report, err);
    out << "clean: rows_in=" << cleaned.report.rows_in << " rows_out=" << cleaned.report.rows_out
        << " removed_fraction=" << data::format_number(cleaned.report.removed_fraction) << '\n';
    return cleaned;
}

data::RawTable pick_rows(const data::RawTable& table, const std::vector<std::size_t>& rows) {
    data::RawTable out;
    out.header = table.header;
    out.provenance = table.provenance;
    for (std::size_t r : rows) out.rows.push_back(table.rows[r]);
    return out;
}

std::string curve_csv(const train::LossCurve& curve) {
    std::ostringstream s;
    s << "epoch,train_loss,val_loss\n";
    for (std::size_t e = 0; e < curve.train_loss.size(); ++e) {
        s << (e + 1) << ',' << data::format_number(curve.train_loss[e]) << ',';
        if (e < curve.val_loss.size()) s << data::format_number(curve.val_loss[e]);
        s << '\n';
    }
    return s.str();
}

int cmd_gen_data(const GenDataArgs& a, std::ostream& out) {
    const auto table = data::synthesize(a.rows, a.seed, a.noise);
    io::write_file_atomic(a.out, data::to_csv(table));
    out << "wrote " << table.rows.size() << " rows to " << a.out << '\n';
    if (a.show_truth) {
        for (auto t : {data::Target::PersonTrips, data::Target::VehicleTrips}) {
            out << data::truth_function(t).describe(data::to_string(t)) << '\n';
        }
        out << "noise: target = truth * exp(" << data::format_number(a.noise) << " * N(0,1))\n";
    }
    return kOk;
}

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
    const data::Target target = require_target(a.target);
    const auto fractions = data::parse_split(a.split);
    train::TrainConfig config;
    config.batch_size = a.batch;
    config.epochs = a.epochs;
    config.learning_rate = a.lr;
    config.seed = a.seed;
    config.validation_fraction = 0.0;  // validation comes from the split
    train::validate(config);

    const auto& schema = data::FeatureSchema::canonical();
    const auto cleaned = load_clean(a.data, schema, data::CleanScope::FeaturesAndTargets, out, err);
    if (!a.clean_report_out.empty()) {
        io::write_file_atomic(a.clean_report_out, cleaned.report.to_text());
    }
    const data::Dataset all = data::assemble(cleaned.table, schema, target);
    const auto parts = data::split_indices(all.size(), fractions, derive_seed(a.seed, {kSplitStream}));
    if (parts.train.size() < 2) {
        throw ArgumentError("train split has " + std::to_string(parts.train.size()) +
                            " rows; need at least 2");
    }
    const data::Dataset train_raw = data::subset(all, parts.train);
    const data::ScalerParams scaler =
        a.scale_mode == "paper" ? data::fit_scaler(all) : data::fit_scaler(train_raw);

    std::optional<data::Dataset> val_raw;
    std::optional<data::Dataset> val_scaled;
    if (!parts.val.empty()) {
        val_raw.emplace(data::subset(all, parts.val));
        val_scaled.emplace(data::apply_scaler(*val_raw, scaler));
    }
    const auto model = train::train(data::apply_scaler(train_raw, scaler), scaler, config,
                                    val_scaled ? &*val_scaled : nullptr);

    store::save(model, a.model_out, {a.timestamp});
    io::write_file_atomic(a.curve_out, curve_csv(model.curve));
    out << "rows: train=" << parts.train.size() << " val=" << parts.val.size()
        << " test=" << parts.test.size() << '\n';
    out << "final train_loss=" << data::format_number(model.curve.train_loss.back());
    if (!model.curve.val_loss.empty()) {
        out << " val_loss=" << data::format_number(model.curve.val_loss.back());
    }
    out << '\n';
    if (val_raw) {
        const auto report = eval::evaluate_model(model, *val_raw, eval::ZeroPolicy::Exclude);
        out << "validation: " << report.summary_line() << '\n';
    }
    if (!parts.test.empty()) {
        const auto report =
            eval::evaluate_model(model, data::subset(all, parts.test), eval::ZeroPolicy::Exclude);
        out << "test: " << report.summary_line() << '\n';
        if (!a.test_out.empty()) {
            io::write_file_atomic(a.test_out, data::to_csv(pick_rows(cleaned.table, parts.test)));
        }
    } else if (!a.test_out.empty()) {
        throw ArgumentError("--test-out given but the test split is empty");
    }
    out << "model written to " << a.model_out << ", loss curve to " << a.curve_out << '\n';
    return kOk;
}

int cmd_tune(const TuneArgs& a, std::ostream& out, std::ostream& err) {
    const data::Target target = require_target(a.target);
    train::TrainConfig base;
    base.learning_rate = a.lr;
    base.seed = a.seed;
    base.validation_fraction = 0.0;
    tune::GridSpec grid = tune::parse_grid(a.grid, base);
    grid.folds = a.folds;
    grid.threads = a.threads;

    const auto& schema = data::FeatureSchema::canonical();
    const auto cleaned = load_clean(a.data, schema, data::CleanScope::FeaturesAndTargets, out, err);
    const data::Dataset all = data::assemble(cleaned.table, schema, target);
    const data::Dataset scaled = data::apply_scaler(all, data::fit_scaler(all));
    const auto result = tune::grid_search(scaled, grid);

    out << "batch,epochs,mean_cv_mse\n";
    for (const auto& cell : result.cells) {
        out << cell.cell.batch_size << ',' << cell.cell.epochs << ','
            << (cell.diverged ? std::string("inf") : data::format_number(cell.mean_cv_loss)) << '\n';
        if (cell.diverged) {
            err << "warning: cell batch=" << cell.cell.batch_size << " epochs=" << cell.cell.epochs
                << " diverged\n";
        }
    }
    out << "best: batch=" << result.best_config.batch_size << " epochs=" << result.best_config.epochs
        << '\n';
    return kOk;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
    const auto policy = eval::parse_zero_policy(a.zero_policy);
    if (!policy) throw ArgumentError("--zero-policy must be 'error' or 'exclude'");
    const auto model = store::load(a.model);
    const auto cleaned = load_clean(a.data, model.schema, data::CleanScope::FeaturesAndTargets, out, err);
    const auto ds = data::assemble(cleaned.table, model.schema, model.target_name);
    const auto report = eval::evaluate_model(model, ds, *policy);
    out << report.summary_line() << '\n';
    eval::export_pairs(report, a.pairs_out);
    return kOk;
}

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
    const auto model = store::load(a.model);
    const auto cleaned = load_clean(a.input, model.schema, data::CleanScope::FeaturesOnly, out, err);
    if (cleaned.report.rows_out < cleaned.report.rows_in) {
        err << "warning: " << (cleaned.report.rows_in - cleaned.report.rows_out)
            << " rows with empty features were skipped\n";
    }
    const Matrix features = data::assemble_features(cleaned.table, model.schema);
    const auto predicted = train::predict(model, features);
    std::ostringstream csv;
    csv << "index,predicted\n";
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        csv << cleaned.kept_rows[i] << ',' << data::format_number(predicted[i]) << '\n';
    }
    io::write_file_atomic(a.out, csv.str());
    out << "wrote " << predicted.size() << " predictions to " << a.out << '\n';
    return kOk;
}

int cmd_schema(std::ostream& out) {
    for (const auto& name : data::FeatureSchema::canonical().all_columns()) {
        out << name << '\n';
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"tripnet: person and vehicle trip prediction with a small dense network"};
    app.name(args.empty() ? "tripnet" : fs::path(args[0]).filename().string());
    app.set_version_flag("--version", std::string("tripnet ") + kVersion + " (model schema " +
                                          std::to_string(store::kSchemaVersion) + ", kernels " +
                                          std::string(kernels::isa_name(kernels::active().isa)) + ")");
    app.require_subcommand(1);

    GenDataArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic household CSV over the full schema");
    gen_cmd->add_option("--rows", gen.rows, "Number of rows")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    gen_cmd->add_option("--noise", gen.noise, "Lognormal noise sigma")->capture_default_str()->check(
        CLI::NonNegativeNumber);
    gen_cmd->add_option("--out", gen.out, "Output CSV path")->required();
    gen_cmd->add_flag("--show-truth", gen.show_truth, "Print the generating formulas");

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "Clean, split, scale, train and save a model");
    train_cmd->add_option("--data", tr.data, "Input CSV")->required();
    train_cmd->add_option("--target", tr.target, "person_trips or vehicle_trips")->required();
    train_cmd->add_option("--batch", tr.batch, "Minibatch size")->capture_default_str();
    train_cmd->add_option("--epochs", tr.epochs, "Training epochs")->capture_default_str();
    train_cmd->add_option("--lr", tr.lr, "Adam learning rate")->capture_default_str();
    train_cmd->add_option("--seed", tr.seed, "Random seed")->capture_default_str();
    train_cmd->add_option("--split", tr.split, "train,val,test fractions")->capture_default_str();
    train_cmd->add_option("--scale-mode", tr.scale_mode,
                          "Fit the scaler on the train split ('train') or on all rows ('paper')")
        ->capture_default_str()
        ->check(CLI::IsMember({"train", "paper"}));
    train_cmd->add_option("--model-out", tr.model_out, "Model JSON path")->required();
    train_cmd->add_option("--curve-out", tr.curve_out, "Loss curve CSV path")->required();
    train_cmd->add_option("--test-out", tr.test_out, "Write the cleaned test-split rows here");
    train_cmd->add_option("--clean-report-out", tr.clean_report_out, "Write the cleaning report here");
    train_cmd->add_flag("--timestamp", tr.timestamp, "Record created_at in the model file");

    TuneArgs tu;
    auto* tune_cmd = app.add_subcommand("tune", "Grid search over batch size and epochs with k-fold CV");
    tune_cmd->add_option("--data", tu.data, "Input CSV")->required();
    tune_cmd->add_option("--target", tu.target, "person_trips or vehicle_trips")->required();
    tune_cmd->add_option("--grid", tu.grid, "e.g. batch=10,20;epochs=5,10")->capture_default_str();
    tune_cmd->add_option("--folds", tu.folds, "Cross-validation folds")->capture_default_str();
    tune_cmd->add_option("--seed", tu.seed, "Random seed")->capture_default_str();
    tune_cmd->add_option("--lr", tu.lr, "Adam learning rate")->capture_default_str();
    tune_cmd->add_option("--threads", tu.threads, "Worker threads, 0 = all cores")->capture_default_str();

    EvaluateArgs ev;
    auto* eval_cmd = app.add_subcommand("evaluate", "Score a saved model with MAPE");
    eval_cmd->add_option("--model", ev.model, "Model JSON")->required();
    eval_cmd->add_option("--data", ev.data, "CSV with features and targets")->required();
    eval_cmd->add_option("--zero-policy", ev.zero_policy, "error or exclude")
        ->capture_default_str()
        ->check(CLI::IsMember({"error", "exclude"}));
    eval_cmd->add_option("--pairs-out", ev.pairs_out, "index,actual,predicted CSV")->required();

    PredictArgs pr;
    auto* predict_cmd = app.add_subcommand("predict", "Predict targets for feature rows");
    predict_cmd->add_option("--model", pr.model, "Model JSON")->required();
    predict_cmd->add_option("--input", pr.input, "CSV with the feature columns")->required();
    predict_cmd->add_option("--out", pr.out, "index,predicted CSV")->required();

    auto* schema_cmd = app.add_subcommand("schema", "Print the 16 feature and 2 target column names");

    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }

    try {
        if (*gen_cmd) return cmd_gen_data(gen, out);
        if (*train_cmd) return cmd_train(tr, out, err);
        if (*tune_cmd) return cmd_tune(tu, out, err);
        if (*eval_cmd) return cmd_evaluate(ev, out, err);
        if (*predict_cmd) return cmd_predict(pr, out, err);
        if (*schema_cmd) return cmd_schema(out);
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return kDivergence;
    } catch (const TuneError& e) {
        err << "error: " << e.what() << '\n';
        return kDivergence;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace tripnet::cli
