#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "tripnet/data/schema.hpp"
#include "tripnet/data/synth.hpp"
#include "tripnet/data/table.hpp"
#include "tripnet/store/model_io.hpp"

namespace tripnet::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tripnet");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("tripnet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string gen(std::size_t rows, std::uint64_t seed = 7, const std::string& name = "data.csv",
                    const std::string& noise = "0.02") {
        const auto r = run_cli({"gen-data", "--rows", std::to_string(rows), "--seed", std::to_string(seed),
                                "--noise", noise, "--out", path(name)});
        EXPECT_EQ(r.code, 0) << r.err;
        return path(name);
    }

    Result train(const std::string& data, const std::string& tag, std::vector<std::string> extra = {}) {
        std::vector<std::string> args{"train",       "--data",      data,
                                      "--target",    "person_trips", "--model-out",
                                      path(tag + "_model.json"),     "--curve-out", path(tag + "_curve.csv")};
        args.insert(args.end(), extra.begin(), extra.end());
        return run_cli(args);
    }

    fs::path dir_;
};

TEST_F(Cli, GenDataWritesHeaderPlusRowsDeterministically) {
    gen(100, 7, "a.csv");
    gen(100, 7, "b.csv");
    const auto text = slurp(path("a.csv"));
    EXPECT_EQ(lines_of(text).size(), 101u);
    EXPECT_EQ(text, slurp(path("b.csv")));
    gen(100, 8, "c.csv");
    EXPECT_NE(text, slurp(path("c.csv")));
}

TEST_F(Cli, GenDataShowTruthAndNoiselessTargets) {
    const auto r = run_cli({"gen-data", "--rows", "50", "--noise", "0", "--out", path("d.csv"), "--show-truth"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "person_trips = "));
    EXPECT_TRUE(contains(r.out, "vehicle_trips = "));
    const auto t = data::read_csv(path("d.csv"));
    const auto& schema = data::FeatureSchema::canonical();
    const std::size_t pcol = *t.column_index("person_trips");
    for (const auto& row : t.rows) {
        std::vector<double> feats;
        for (std::size_t j = 0; j < schema.width(); ++j) feats.push_back(*row[j]);
        EXPECT_EQ(*row[pcol], data::truth_function(data::Target::PersonTrips).evaluate(schema, feats));
    }
}

TEST_F(Cli, TrainDefaultsWriteModelAndCurve) {
    const auto data = gen(400);
    const auto r = train(data, "m");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(path("m_model.json")));
    const auto curve = lines_of(slurp(path("m_curve.csv")));
    ASSERT_EQ(curve.size(), 6u);
    EXPECT_EQ(curve[0], "epoch,train_loss,val_loss");
    EXPECT_EQ(curve[1].substr(0, 2), "1,");
    EXPECT_TRUE(contains(r.out, "clean: rows_in=400 rows_out=400"));
    EXPECT_TRUE(contains(r.out, "rows: train=280 val=80 test=40"));
    EXPECT_TRUE(contains(r.out, "validation: mape="));
    EXPECT_TRUE(contains(r.out, "test: mape="));

    const auto r2 = train(data, "e3", {"--epochs", "3"});
    ASSERT_EQ(r2.code, 0) << r2.err;
    EXPECT_EQ(lines_of(slurp(path("e3_curve.csv"))).size(), 4u);
}

TEST_F(Cli, TrainRejectsBadSplit) {
    const auto data = gen(50);
    const auto r = train(data, "bad", {"--split", "0.5,0.6,0.1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "sum to 1")) << r.err;
    EXPECT_FALSE(fs::exists(path("bad_model.json")));
}

TEST_F(Cli, InputErrorsExitTwo) {
    const auto data = gen(50);
    EXPECT_EQ(train(data, "t", {"--target", "bike_trips"}).code, 2);
    EXPECT_EQ(train(data, "t", {"--batch", "0"}).code, 2);
    EXPECT_EQ(run_cli({"train", "--data", data}).code, 2);
    EXPECT_EQ(run_cli({"no-such-command"}).code, 2);
    EXPECT_EQ(run_cli({"gen-data", "--rows", "abc", "--out", path("x.csv")}).code, 2);

    write_text(path("ragged.csv"), "a,b\n1,2,3\n");
    EXPECT_EQ(train(path("ragged.csv"), "r").code, 2);
    write_text(path("nan_lr.csv"), slurp(data));
    EXPECT_EQ(train(path("nan_lr.csv"), "n", {"--lr", "-1"}).code, 2);
}

TEST_F(Cli, IoErrorsExitFour) {
    EXPECT_EQ(train(path("absent.csv"), "a").code, 4);
    const auto data = gen(50);
    const auto r = run_cli({"train", "--data", data, "--target", "person_trips", "--model-out",
                            path("no/such/dir/m.json"), "--curve-out", path("c.csv")});
    EXPECT_EQ(r.code, 4) << r.err;
    EXPECT_EQ(run_cli({"gen-data", "--rows", "5", "--out", path("missing/dir/d.csv")}).code, 4);
    EXPECT_EQ(run_cli({"evaluate", "--model", path("absent.json"), "--data", data, "--pairs-out",
                       path("p.csv")}).code,
              4);
}

TEST_F(Cli, DivergenceExitsThree) {
    const auto data = gen(60);
    auto t = data::read_csv(data);
    const std::size_t pcol = *t.column_index("person_trips");
    for (auto& row : t.rows) row[pcol] = 1e200;
    write_text(path("huge.csv"), data::to_csv(t));
    const auto r = train(path("huge.csv"), "h");
    EXPECT_EQ(r.code, 3) << r.err;
    EXPECT_TRUE(contains(r.err, "diverged")) << r.err;
}

TEST_F(Cli, CorruptModelExitsTwo) {
    const auto data = gen(50);
    write_text(path("broken.json"), "{\"schema_version\": 1, \"layers\": []}");
    const auto r = run_cli({"evaluate", "--model", path("broken.json"), "--data", data, "--pairs-out", path("p.csv")});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "layers")) << r.err;
}

TEST_F(Cli, TuneSingleCellAndRiggedGrid) {
    const auto data = gen(600);
    const auto one = run_cli({"tune", "--data", data, "--target", "person_trips", "--grid", "batch=20;epochs=2",
                              "--folds", "3"});
    ASSERT_EQ(one.code, 0) << one.err;
    const auto lines = lines_of(one.out);
    EXPECT_NE(std::find(lines.begin(), lines.end(), "batch,epochs,mean_cv_mse"), lines.end());
    EXPECT_EQ(lines.back(), "best: batch=20 epochs=2");

    const auto rigged = run_cli({"tune", "--data", data, "--target", "person_trips", "--grid",
                                 "batch=20;epochs=1,40", "--threads", "2"});
    ASSERT_EQ(rigged.code, 0) << rigged.err;
    EXPECT_EQ(lines_of(rigged.out).back(), "best: batch=20 epochs=40");
}

TEST_F(Cli, TuneMalformedGridExitsTwoWithGrammar) {
    const auto data = gen(50);
    const auto r = run_cli({"tune", "--data", data, "--target", "person_trips", "--grid", "batch=ten"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "grid grammar")) << r.err;
}

// 16 -> 1 identity layer that copies hh_count, with an identity scaler.
std::string perfect_model_json() {
    const auto& schema = data::FeatureSchema::canonical();
    std::string weights, zeros, ones, names;
    for (std::size_t j = 0; j < schema.width(); ++j) {
        const std::string sep = j ? "," : "";
        weights += sep + (schema.features()[j] == "hh_count" ? "1" : "0");
        zeros += sep + "0";
        ones += sep + "1";
        names += sep + "\"" + schema.features()[j] + "\"";
    }
    return "{\"schema_version\":1,\"layers\":[{\"fan_in\":16,\"fan_out\":1,\"activation\":\"identity\","
           "\"weights\":[" + weights + "],\"bias\":[0]}],\"scaler\":{\"means\":[" + zeros + "],\"stds\":[" + ones +
           "]},\"features\":[" + names + "],\"target\":\"person_trips\",\"train_config\":{\"batch_size\":20,"
           "\"epochs\":5,\"learning_rate\":0.001,\"seed\":1,\"validation_fraction\":0}}";
}

TEST_F(Cli, EvaluatePerfectModel) {
    write_text(path("perfect.json"), perfect_model_json());
    auto t = data::read_csv(gen(30));
    const std::size_t pcol = *t.column_index("person_trips");
    const std::size_t hcol = *t.column_index("hh_count");
    for (auto& row : t.rows) row[pcol] = row[hcol];
    write_text(path("exact.csv"), data::to_csv(t));

    const auto r = run_cli({"evaluate", "--model", path("perfect.json"), "--data", path("exact.csv"), "--pairs-out",
                            path("pairs.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "mape=0 accuracy=100 n=30 excluded=0")) << r.out;
    const auto pairs = lines_of(slurp(path("pairs.csv")));
    ASSERT_EQ(pairs.size(), 31u);
    EXPECT_EQ(pairs[0], "index,actual,predicted");
}

TEST_F(Cli, EvaluateSchemaMismatchNamesColumn) {
    write_text(path("perfect.json"), perfect_model_json());
    auto t = data::read_csv(gen(10));
    t.header[*t.column_index("lc_1p_u65")] = "life_cycle";
    write_text(path("renamed.csv"), data::to_csv(t));
    const auto r = run_cli({"evaluate", "--model", path("perfect.json"), "--data", path("renamed.csv"),
                            "--pairs-out", path("p.csv")});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "lc_1p_u65")) << r.err;
}

TEST_F(Cli, EvaluateZeroPolicy) {
    write_text(path("perfect.json"), perfect_model_json());
    auto t = data::read_csv(gen(10));
    t.rows[2][*t.column_index("person_trips")] = 0.0;
    write_text(path("zero.csv"), data::to_csv(t));
    const std::vector<std::string> base{"evaluate", "--model", path("perfect.json"), "--data", path("zero.csv"),
                                        "--pairs-out", path("p.csv")};
    EXPECT_EQ(run_cli(base).code, 2);
    auto args = base;
    args.insert(args.end(), {"--zero-policy", "exclude"});
    const auto r = run_cli(args);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "n=9 excluded=1")) << r.out;
    EXPECT_EQ(lines_of(slurp(path("p.csv"))).size(), 11u);
}

TEST_F(Cli, PredictMatchesEvaluateAndNeedsNoTargets) {
    const auto data = gen(200);
    ASSERT_EQ(train(data, "m", {"--epochs", "2"}).code, 0);
    ASSERT_EQ(run_cli({"evaluate", "--model", path("m_model.json"), "--data", data, "--pairs-out",
                       path("pairs.csv")}).code,
              0);

    auto t = data::read_csv(data);
    t.header.resize(16);
    for (auto& row : t.rows) row.resize(16);
    write_text(path("features.csv"), data::to_csv(t));
    const auto r = run_cli({"predict", "--model", path("m_model.json"), "--input", path("features.csv"), "--out",
                            path("pred.csv")});
    ASSERT_EQ(r.code, 0) << r.err;

    const auto pred = data::read_csv(path("pred.csv"));
    const auto pairs = data::read_csv(path("pairs.csv"));
    EXPECT_EQ(pred.header, (std::vector<std::string>{"index", "predicted"}));
    ASSERT_EQ(pred.rows.size(), 200u);
    ASSERT_EQ(pairs.rows.size(), 200u);
    for (std::size_t i = 0; i < 200; ++i) {
        EXPECT_EQ(*pred.rows[i][0], static_cast<double>(i));
        EXPECT_EQ(*pred.rows[i][1], *pairs.rows[i][2]);
    }
}

TEST_F(Cli, PredictSkipsIncompleteRowsKeepingSourceIndex) {
    write_text(path("perfect.json"), perfect_model_json());
    auto t = data::read_csv(gen(5));
    t.rows[1][0].reset();
    write_text(path("gap.csv"), data::to_csv(t));
    const auto r = run_cli({"predict", "--model", path("perfect.json"), "--input", path("gap.csv"), "--out",
                            path("pred.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.err, "1 rows with empty features were skipped"));
    const auto pred = data::read_csv(path("pred.csv"));
    ASSERT_EQ(pred.rows.size(), 4u);
    EXPECT_EQ(*pred.rows[1][0], 2.0);
}

TEST_F(Cli, SchemaPrintsEighteenNames) {
    const auto r = run_cli({"schema"});
    ASSERT_EQ(r.code, 0);
    const auto names = lines_of(r.out);
    EXPECT_EQ(names, data::FeatureSchema::canonical().all_columns());
    ASSERT_EQ(names.size(), 18u);
    EXPECT_EQ(names.front(), "hh_veh_0");
}

TEST_F(Cli, VersionNamesArtifactAndModelSchema) {
    const auto r = run_cli({"--version"});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "tripnet 1.0.0"));
    EXPECT_TRUE(contains(r.out, "model schema 1"));
}

TEST_F(Cli, EndToEndIsByteReproducible) {
    const auto data = gen(500);
    for (const std::string tag : {"a", "b"}) {
        ASSERT_EQ(train(data, tag, {"--epochs", "3", "--seed", "11", "--test-out", path(tag + "_test.csv")}).code, 0);
        ASSERT_EQ(run_cli({"evaluate", "--model", path(tag + "_model.json"), "--data", path(tag + "_test.csv"),
                           "--pairs-out", path(tag + "_pairs.csv")}).code,
                  0);
    }
    for (const std::string suffix : {"_model.json", "_curve.csv", "_test.csv", "_pairs.csv"}) {
        EXPECT_EQ(slurp(path("a" + suffix)), slurp(path("b" + suffix))) << suffix;
    }
    ASSERT_EQ(train(data, "c", {"--epochs", "3", "--seed", "12"}).code, 0);
    EXPECT_NE(slurp(path("a_model.json")), slurp(path("c_model.json")));
}

TEST_F(Cli, TestSplitOutliersDoNotLeakIntoScaler) {
    const auto data = gen(300);
    ASSERT_EQ(train(data, "base", {"--epochs", "2", "--test-out", path("test.csv")}).code, 0);

    // Turn every test-split row into an extreme outlier; the split depends only on row count and seed.
    const auto test_rows = data::read_csv(path("test.csv")).rows;
    const std::set<std::vector<data::Cell>> held(test_rows.begin(), test_rows.end());
    auto t = data::read_csv(data);
    const std::size_t pop = *t.column_index("total_pop");
    std::size_t changed = 0;
    for (auto& row : t.rows) {
        if (held.count(row)) {
            row[pop] = *row[pop] * 1000.0;
            ++changed;
        }
    }
    ASSERT_EQ(changed, test_rows.size());
    write_text(path("outliers.csv"), data::to_csv(t));

    ASSERT_EQ(train(path("outliers.csv"), "out", {"--epochs", "2"}).code, 0);
    EXPECT_EQ(slurp(path("base_model.json")), slurp(path("out_model.json")));
    EXPECT_EQ(slurp(path("base_curve.csv")), slurp(path("out_curve.csv")));

    // Scaling before the split does see them.
    ASSERT_EQ(train(data, "pb", {"--epochs", "2", "--scale-mode", "paper"}).code, 0);
    ASSERT_EQ(train(path("outliers.csv"), "po", {"--epochs", "2", "--scale-mode", "paper"}).code, 0);
    EXPECT_NE(slurp(path("pb_model.json")), slurp(path("po_model.json")));
}

TEST_F(Cli, CleanReportFile) {
    auto t = data::read_csv(gen(100));
    const std::size_t urban = *t.column_index("urban_group");
    for (std::size_t i : {5u, 50u, 95u}) t.rows[i][urban].reset();
    write_text(path("gaps.csv"), data::to_csv(t));
    const auto r = train(path("gaps.csv"), "g", {"--epochs", "1", "--clean-report-out", path("report.txt")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "rows_out=97 removed_fraction=0.03"));
    EXPECT_TRUE(contains(slurp(path("report.txt")), "rows_out=97"));
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(TRIPNET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(Cli, BinaryExitCodes) {
    EXPECT_EQ(run_binary("schema"), 0);
    EXPECT_EQ(run_binary("train --data x.csv"), 2);
    EXPECT_EQ(run_binary("evaluate --model " + path("none.json") + " --data " + path("none.csv") +
                         " --pairs-out " + path("p.csv")),
              4);
    const auto data = gen(40);
    auto t = data::read_csv(data);
    for (auto& row : t.rows) row[*t.column_index("person_trips")] = 1e200;
    write_text(path("huge.csv"), data::to_csv(t));
    EXPECT_EQ(run_binary("train --data " + path("huge.csv") + " --target person_trips --model-out " +
                         path("m.json") + " --curve-out " + path("c.csv")),
              3);
}

}  // namespace
}  // namespace tripnet::cli
