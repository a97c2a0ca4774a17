#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "adp/ingest.hpp"
#include "adp/types.hpp"

namespace adp::mixer {

struct MixtureEntry {
    std::string dataset;
    double w = 1.0;  // per-dataset multiplier, > 0
    std::string path;
};

using CategoryMap = std::map<std::string, std::set<ingest::Category>>;

struct MixturePlan {
    std::vector<MixtureEntry> entries;
    std::uint64_t seed = 0;
    std::uint64_t epoch = 0;
    CategoryMap categories;
};

enum class CategoryFilter { WebOnly, NonWeb };

class EmptyCorpus : public std::runtime_error {
public:
    explicit EmptyCorpus(const std::string& dataset)
        : std::runtime_error("dataset '" + dataset + "' is empty") {}
};

class UnknownDataset : public std::runtime_error {
public:
    explicit UnknownDataset(const std::string& dataset)
        : std::runtime_error("dataset '" + dataset + "' missing from category map") {}
};

/// Number of examples drawn per epoch: ceil(w * n).
std::size_t sample_count(double w, std::size_t n);

/// Deterministic per-(seed, epoch, dataset) substream seed; independent
/// datasets never perturb each other's draws.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t epoch, const std::string& dataset);

/// Index sequence for one dataset: w < 1 draws distinct indices uniformly
/// without replacement, w > 1 draws with replacement, w == 1 is the identity
/// (no RNG touched).
std::vector<std::size_t> resample_indices(std::size_t n, double w, std::uint64_t stream_seed);

std::vector<std::string> resample(const std::vector<std::string>& corpus, double w,
                                  std::uint64_t stream_seed);

/// Keeps web-browsing entries (WebOnly) or their complement (NonWeb).
std::vector<MixtureEntry> filter_by_category(const std::vector<MixtureEntry>& entries,
                                             const CategoryMap& map, CategoryFilter mode);

struct MixStats {
    std::map<std::string, std::size_t> per_dataset;
    std::size_t total = 0;
};

/// Samples every entry, concatenates, shuffles with a seed derived from
/// (plan.seed, plan.epoch) and writes the result as ADP-JSONL.
MixStats build_mixture(const MixturePlan& plan, const std::string& out_path,
                       std::optional<CategoryFilter> filter = std::nullopt);

MixturePlan parse_plan(const JsonValue& doc);
MixturePlan load_plan(const std::string& path);

}  // namespace adp::mixer
