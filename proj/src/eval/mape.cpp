#include "tripnet/eval/mape.hpp"

#include <cmath>
#include <sstream>

#include "tripnet/data/table.hpp"
#include "tripnet/error.hpp"
#include "tripnet/io/atomic_file.hpp"

namespace tripnet::eval {

std::optional<ZeroPolicy> parse_zero_policy(std::string_view text) noexcept {
    if (text == "error") return ZeroPolicy::Error;
    if (text == "exclude") return ZeroPolicy::Exclude;
    return std::nullopt;
}

std::string EvalReport::summary_line() const {
    return "mape=" + data::format_number(mape_percent) +
           " accuracy=" + data::format_number(accuracy_percent) + " n=" + std::to_string(n) +
           " excluded=" + std::to_string(excluded_zero_actuals);
}

EvalReport mape(std::span<const double> actual, std::span<const double> forecast, ZeroPolicy policy) {
    if (actual.size() != forecast.size()) {
        throw ShapeError("mape: " + std::to_string(actual.size()) + " actuals vs " +
                         std::to_string(forecast.size()) + " forecasts");
    }
    if (actual.empty()) {
        throw EmptyEvaluationError("mape: no pairs to evaluate");
    }
    EvalReport report;
    report.pairs.reserve(actual.size());
    double sum = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        report.pairs.push_back({actual[t], forecast[t]});
        if (actual[t] == 0.0) {
            if (policy == ZeroPolicy::Error) {
                throw ZeroActualError(t);
            }
            ++report.excluded_zero_actuals;
            continue;
        }
        sum += std::abs(actual[t] - forecast[t]) / std::abs(actual[t]);
        ++report.n;
    }
    if (report.n == 0) {
        throw EmptyEvaluationError("mape: every actual value is zero; nothing left to evaluate");
    }
    report.mape_percent = 100.0 * (sum / static_cast<double>(report.n));
    if (!std::isfinite(report.mape_percent)) {
        throw NumericError("mape: result is not finite");
    }
    report.accuracy_percent = 100.0 - report.mape_percent;
    return report;
}

EvalReport evaluate_model(const train::TrainedModel& model, const data::Dataset& ds, ZeroPolicy policy) {
    if (!(ds.schema == model.schema)) {
        throw SchemaError("evaluate: dataset schema does not match the model's feature list");
    }
    const auto predicted = train::predict(model, ds.features);
    return mape(ds.target.values(), predicted, policy);
}

std::string pairs_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "index,actual,predicted\n";
    for (std::size_t i = 0; i < report.pairs.size(); ++i) {
        out << i << ',' << data::format_number(report.pairs[i].actual) << ','
            << data::format_number(report.pairs[i].predicted) << '\n';
    }
    return out.str();
}

void export_pairs(const EvalReport& report, const std::filesystem::path& destination) {
    if (report.pairs.empty()) {
        throw EmptyEvaluationError("export_pairs: report has no pairs");
    }
    io::write_file_atomic(destination, pairs_csv(report));
}

}  // namespace tripnet::eval
