#include "tripnet/tune/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <thread>

#include "tripnet/data/table.hpp"
#include "tripnet/error.hpp"
#include "tripnet/numerics/rng.hpp"

namespace tripnet::tune {
namespace {

constexpr std::uint64_t kFoldStream = 11;
constexpr std::uint64_t kFoldTrainStream = 12;

std::vector<std::size_t> parse_counts(std::string_view name, std::string_view list) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = list.find(',', start);
        const auto token = list.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                              : comma - start);
        const auto value = data::parse_cell(token);
        if (!value || *value < 1 || *value != std::floor(*value) || *value > 1e9) {
            throw FormatError("grid: '" + std::string(token) + "' in '" + std::string(name) +
                              "' is not a positive integer; " + std::string(kGridGrammar));
        }
        out.push_back(static_cast<std::size_t>(*value));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

CellResult evaluate_cell(const data::Dataset& scaled, Cell cell,
                         const std::vector<std::vector<std::size_t>>& folds,
                         const train::TrainConfig& base) {
    CellResult result{cell, {}, 0.0, false};
    const std::size_t n = scaled.size();
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<bool> held(n, false);
        for (std::size_t i : folds[f]) held[i] = true;
        std::vector<std::size_t> train_rows;
        for (std::size_t i = 0; i < n; ++i) {
            if (!held[i]) train_rows.push_back(i);
        }
        train::TrainConfig cfg = base;
        cfg.batch_size = cell.batch_size;
        cfg.epochs = cell.epochs;
        cfg.validation_fraction = 0.0;
        cfg.seed = derive_seed(base.seed, {kFoldTrainStream, f});
        double loss = std::numeric_limits<double>::infinity();
        try {
            const auto fitted = train::fit(data::subset(scaled, train_rows), cfg);
            loss = train::evaluate_mse(fitted.network, data::subset(scaled, folds[f]));
        } catch (const NumericError&) {
            result.diverged = true;
        }
        result.fold_losses.push_back(loss);
    }
    if (result.diverged) {
        result.mean_cv_loss = std::numeric_limits<double>::infinity();
    } else {
        double sum = 0.0;
        for (double l : result.fold_losses) sum += l;
        result.mean_cv_loss = sum / static_cast<double>(result.fold_losses.size());
    }
    return result;
}

}  // namespace

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw ArgumentError("kfold: k must be at least 2");
    }
    if (n < k) {
        throw ArgumentError("kfold: need at least k=" + std::to_string(k) + " rows, got " +
                            std::to_string(n));
    }
    const auto perm = permutation(n, seed);
    std::vector<std::vector<std::size_t>> folds(k);
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                        perm.begin() + static_cast<std::ptrdiff_t>(pos + len));
        std::sort(folds[f].begin(), folds[f].end());
        pos += len;
    }
    return folds;
}

void validate(const GridSpec& grid) {
    const auto check = [](const std::vector<std::size_t>& list, const char* name) {
        if (list.empty()) {
            throw ArgumentError(std::string("grid: ") + name + " list is empty");
        }
        std::set<std::size_t> seen;
        for (std::size_t v : list) {
            if (v < 1) throw ArgumentError(std::string("grid: ") + name + " entries must be >= 1");
            if (!seen.insert(v).second) {
                throw ArgumentError(std::string("grid: duplicate ") + name + " value " +
                                    std::to_string(v));
            }
        }
    };
    check(grid.batch_sizes, "batch");
    check(grid.epochs_list, "epochs");
    if (grid.folds < 2) {
        throw ArgumentError("grid: folds must be at least 2");
    }
    train::validate(grid.base);
}

GridSpec parse_grid(std::string_view text, const train::TrainConfig& base) {
    GridSpec grid;
    grid.base = base;
    bool have_batch = false;
    bool have_epochs = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto semi = text.find(';', start);
        const auto pair = trim(text.substr(start, semi == std::string_view::npos ? std::string_view::npos
                                                                                 : semi - start));
        if (pair.empty()) {
            throw FormatError("grid: empty entry; " + std::string(kGridGrammar));
        }
        const auto eq = pair.find('=');
        if (eq == std::string_view::npos) {
            throw FormatError("grid: '" + std::string(pair) + "' lacks '='; " + std::string(kGridGrammar));
        }
        const auto name = trim(pair.substr(0, eq));
        const auto values = pair.substr(eq + 1);
        if (name == "batch" && !have_batch) {
            grid.batch_sizes = parse_counts(name, values);
            have_batch = true;
        } else if (name == "epochs" && !have_epochs) {
            grid.epochs_list = parse_counts(name, values);
            have_epochs = true;
        } else {
            throw FormatError("grid: unexpected or repeated name '" + std::string(name) + "'; " +
                              std::string(kGridGrammar));
        }
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    if (!have_batch) grid.batch_sizes = {base.batch_size};
    if (!have_epochs) grid.epochs_list = {base.epochs};
    try {
        validate(grid);
    } catch (const ArgumentError& e) {
        throw FormatError(std::string(e.what()) + "; " + std::string(kGridGrammar));
    }
    return grid;
}

TuneResult search_cells(const data::Dataset& scaled, const std::vector<Cell>& cells,
                        std::size_t folds, const train::TrainConfig& base, std::size_t threads) {
    if (cells.empty()) {
        throw ArgumentError("search: no cells to evaluate");
    }
    train::validate(base);
    const auto fold_sets = kfold_indices(scaled.size(), folds, derive_seed(base.seed, {kFoldStream}));

    std::vector<std::optional<CellResult>> slots(cells.size());
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, cells.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            slots[i] = evaluate_cell(scaled, cells[i], fold_sets, base);
        }
    } else {
        // Each slot is written by exactly one worker; results are schedule independent.
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < cells.size(); i = next++) {
                        slots[i] = evaluate_cell(scaled, cells[i], fold_sets, base);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    TuneResult result;
    result.best_index = cells.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < slots.size(); ++i) {
        result.cells.push_back(std::move(*slots[i]));
        if (result.cells.back().mean_cv_loss < best) {
            best = result.cells.back().mean_cv_loss;
            result.best_index = i;
        }
    }
    if (result.best_index == cells.size()) {
        throw TuneError("every grid cell diverged; lower the learning rate or check the data");
    }
    result.best_config = base;
    result.best_config.batch_size = cells[result.best_index].batch_size;
    result.best_config.epochs = cells[result.best_index].epochs;
    return result;
}

TuneResult grid_search(const data::Dataset& scaled, const GridSpec& grid) {
    validate(grid);
    std::vector<Cell> cells;
    for (std::size_t b : grid.batch_sizes) {
        for (std::size_t e : grid.epochs_list) {
            cells.push_back({b, e});
        }
    }
    return search_cells(scaled, cells, grid.folds, grid.base, grid.threads);
}

}  // namespace tripnet::tune
