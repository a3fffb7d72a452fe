#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tripnet/data/dataset.hpp"
#include "tripnet/train/train.hpp"

namespace tripnet::tune {

/// k disjoint validation folds covering {0..n-1}; sizes differ by at most one.
/// ArgumentError unless k >= 2 and n >= k.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed);

struct GridSpec {
    std::vector<std::size_t> batch_sizes;
    std::vector<std::size_t> epochs_list;
    std::size_t folds = 5;
    /// Supplies learning rate and seed for every cell.
    train::TrainConfig base;
    /// Worker threads for cell evaluation; 0 picks the hardware concurrency.
    std::size_t threads = 1;
};

/// ArgumentError unless both lists are non-empty, entries >= 1, no duplicates, folds >= 2.
void validate(const GridSpec& grid);

/// Parses `batch=10,20;epochs=5,10,50`. A missing name keeps the base value.
/// FormatError on anything else.
GridSpec parse_grid(std::string_view text, const train::TrainConfig& base);

inline constexpr std::string_view kGridGrammar =
    "grid grammar: name=value[,value...] pairs separated by ';' with names 'batch' and 'epochs', "
    "e.g. batch=10,20;epochs=5,10,50";

struct Cell {
    std::size_t batch_size;
    std::size_t epochs;
};

struct CellResult {
    Cell cell;
    std::vector<double> fold_losses;  // held-out MSE per fold; +inf for a diverged fold
    double mean_cv_loss;              // +inf if any fold diverged
    bool diverged;
};

struct TuneResult {
    std::vector<CellResult> cells;  // grid order: batch-major, epochs varying fastest
    std::size_t best_index;
    train::TrainConfig best_config;
};

/// Cross-validated search over an explicit cell list (duplicates allowed).
/// Every cell shares the same folds and per-fold training seeds, so identical
/// cells score identically; the earliest minimum wins. Diverged cells score
/// +inf; TuneError if every cell diverged.
TuneResult search_cells(const data::Dataset& scaled, const std::vector<Cell>& cells,
                        std::size_t folds, const train::TrainConfig& base, std::size_t threads = 1);

/// search_cells over batch_sizes x epochs_list.
TuneResult grid_search(const data::Dataset& scaled, const GridSpec& grid);

}  // namespace tripnet::tune
