#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tripnet/data/table.hpp"
#include "tripnet/error.hpp"
#include "tripnet/eval/mape.hpp"

namespace tripnet::eval {
namespace {

namespace fs = std::filesystem;

TEST(Mape, PerfectForecast) {
    const std::vector<double> a{3, 4, 5};
    const EvalReport r = mape(a, a);
    EXPECT_EQ(r.mape_percent, 0.0);
    EXPECT_EQ(r.accuracy_percent, 100.0);
    EXPECT_EQ(r.n, 3u);
}

TEST(Mape, HandArithmetic) {
    // |100-110|/100 = 0.1 and |200-180|/200 = 0.1; mean 0.1 -> 10%.
    EXPECT_DOUBLE_EQ(mape(std::vector<double>{100, 200}, std::vector<double>{110, 180}).mape_percent, 10.0);
    const EvalReport r = mape(std::vector<double>{50}, std::vector<double>{49});
    EXPECT_DOUBLE_EQ(r.mape_percent, 2.0);
    EXPECT_DOUBLE_EQ(r.accuracy_percent, 98.0);
    EXPECT_EQ(r.summary_line(), "mape=2 accuracy=98 n=1 excluded=0");
}

TEST(Mape, ZeroPolicies) {
    const std::vector<double> a{4, 0, 2}, f{5, 1, 2};
    try {
        mape(a, f);
        FAIL();
    } catch (const ZeroActualError& e) {
        EXPECT_EQ(e.index(), 1u);
    }
    const EvalReport r = mape(a, f, ZeroPolicy::Exclude);
    EXPECT_EQ(r.n, 2u);
    EXPECT_EQ(r.excluded_zero_actuals, 1u);
    EXPECT_EQ(r.n, r.pairs.size() - r.excluded_zero_actuals);
    EXPECT_DOUBLE_EQ(r.mape_percent, 12.5);
    EXPECT_THROW(mape(std::vector<double>{0, 0}, std::vector<double>{1, 1}, ZeroPolicy::Exclude),
                 EmptyEvaluationError);
    EXPECT_EQ(parse_zero_policy("exclude"), ZeroPolicy::Exclude);
    EXPECT_FALSE(parse_zero_policy("skip").has_value());
}

TEST(Mape, ShapeAndEmptyErrors) {
    EXPECT_THROW(mape(std::vector<double>{1, 2}, std::vector<double>{1}), ShapeError);
    EXPECT_THROW(mape(std::vector<double>{}, std::vector<double>{}), EmptyEvaluationError);
}

TEST(Mape, MatchesNaiveLoopAndIsScaleInvariant) {
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<int> len(1, 8);
    std::uniform_real_distribution<double> mag(0.1, 100.0), fc(-50.0, 150.0);
    std::bernoulli_distribution neg(0.2);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = len(gen);
        std::vector<double> a(n), f(n);
        for (int i = 0; i < n; ++i) {
            a[i] = neg(gen) ? -mag(gen) : mag(gen);
            f[i] = fc(gen);
        }
        const double got = mape(a, f).mape_percent;
        EXPECT_NEAR(got, testing::naive_mape(a, f), 1e-12 * std::max(1.0, got));
        EXPECT_GE(got, 0.0);
        for (double c : {0.5, 3.0, 10.0}) {
            std::vector<double> ca(a), cf(f);
            for (int i = 0; i < n; ++i) {
                ca[i] *= c;
                cf[i] *= c;
            }
            EXPECT_NEAR(mape(ca, cf).mape_percent, got, 1e-12 * std::max(1.0, got));
        }
        const EvalReport r = mape(a, f);
        EXPECT_EQ(r.accuracy_percent, 100.0 - r.mape_percent);
    }
}

train::TrainedModel fit_model(const data::Dataset& raw, const train::TrainConfig& c) {
    const auto scaler = data::fit_scaler(raw);
    return train::train(data::apply_scaler(raw, scaler), scaler, c);
}

TEST(EvaluateModel, ConvergesOnNoiselessSynthetic) {
    // Reference run: 5,000 noiseless training rows, 60 epochs -> 0.57% on 1,000 held-out rows.
    const auto set = testing::synthetic_set(6000, 13, 0.0);
    const auto parts = data::split(set.raw, {5.0 / 6.0, 0.0, 1.0 / 6.0}, 1);
    train::TrainConfig c;
    c.epochs = 60;
    c.validation_fraction = 0.0;
    const auto model = fit_model(*parts.train, c);
    const EvalReport r = evaluate_model(model, *parts.test);
    EXPECT_LT(r.mape_percent, 1.0) << r.summary_line();
    EXPECT_EQ(r.n, parts.test->size());
}

TEST(EvaluateModel, MemorizesThreeRows) {
    const auto ds = testing::single_feature_dataset({-1, 0, 1}, {2, 3, 5});
    train::TrainConfig c;
    c.epochs = 3000;
    c.batch_size = 3;
    c.learning_rate = 0.01;
    c.validation_fraction = 0.0;
    const EvalReport r = evaluate_model(fit_model(ds, c), ds);
    EXPECT_LT(r.mape_percent, 0.1) << r.summary_line();
}

train::TrainedModel identity_model(const data::FeatureSchema& schema, std::size_t pick) {
    std::vector<double> w(schema.width(), 0.0);
    w[pick] = 1.0;
    const nn::Network net({nn::DenseLayer(Matrix(schema.width(), 1, w), Matrix(1, 1), nn::Activation::Identity)});
    data::ScalerParams scaler{std::vector<double>(schema.width(), 0.0), std::vector<double>(schema.width(), 1.0)};
    return {net, scaler, schema, data::Target::PersonTrips, {}, {}};
}

TEST(EvaluateModel, OneRowPerfectModel) {
    const auto ds = testing::single_feature_dataset({7}, {7});
    const EvalReport r = evaluate_model(identity_model(ds.schema, 0), ds);
    EXPECT_EQ(r.accuracy_percent, 100.0);
    EXPECT_EQ(r.n, 1u);
}

TEST(EvaluateModel, SchemaMismatch) {
    const auto set = testing::synthetic_set(200, 1);
    EXPECT_THROW(evaluate_model(identity_model(data::FeatureSchema({"x"}), 0), set.raw), SchemaError);
}

TEST(EvaluateModel, PairsKeepInputOrder) {
    const auto ds = testing::single_feature_dataset({4, 1, 9, 2}, {5, 1, 8, 2});
    const EvalReport r = evaluate_model(identity_model(ds.schema, 0), ds);
    ASSERT_EQ(r.pairs.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(r.pairs[i].actual, ds.target(i, 0));
        EXPECT_EQ(r.pairs[i].predicted, ds.features(i, 0));
    }
}

class ExportPairs : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("tripnet_eval_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

TEST_F(ExportPairs, WritesHeaderAndRowsThatRoundTrip) {
    const std::vector<double> a{1.0 / 3.0, 2.5, 1e-7}, f{0.1 + 0.2, 2.4, 3e-7};
    const EvalReport r = mape(a, f);
    const fs::path out = dir_ / "pairs.csv";
    export_pairs(r, out);
    std::ifstream in(out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[0], "index,actual,predicted");

    const data::RawTable t = data::read_csv(out);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(*t.rows[i][0], static_cast<double>(i));
        EXPECT_NEAR(*t.rows[i][1], a[i], 1e-12);
        EXPECT_NEAR(*t.rows[i][2], f[i], 1e-12);
        EXPECT_EQ(*t.rows[i][1], a[i]);
    }
}

TEST_F(ExportPairs, UnwritableDestinationIsIoError) {
    const EvalReport r = mape(std::vector<double>{1}, std::vector<double>{1});
    EXPECT_THROW(export_pairs(r, dir_ / "missing" / "pairs.csv"), IoError);
    EXPECT_FALSE(fs::exists(dir_ / "missing"));
}

}  // namespace
}  // namespace tripnet::eval
