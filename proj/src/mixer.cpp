#include "adp/mixer.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "adp/jsonl.hpp"

namespace adp::mixer {
namespace {

// splitmix64: stable across platforms, unlike the standard distributions.
struct Rng {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // unbiased bound via rejection
    std::size_t below(std::size_t n) {
        std::uint64_t threshold = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= threshold);
        return static_cast<std::size_t>(x % n);
    }
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

template <typename T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
}

}  // namespace

std::size_t sample_count(double w, std::size_t n) {
    // small backoff so products like 0.1 * 70 do not ceil past the true value
    double p = w * static_cast<double>(n);
    double m = std::ceil(p - 1e-9);
    return m <= 0 ? 0 : static_cast<std::size_t>(m);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t epoch,
                             const std::string& dataset) {
    Rng rng{seed ^ (epoch * 0x9e3779b97f4a7c15ULL) ^ fnv1a(dataset)};
    return rng.next();
}

std::vector<std::size_t> resample_indices(std::size_t n, double w, std::uint64_t stream_seed) {
    if (n == 0) throw EmptyCorpus("<anonymous>");
    std::vector<std::size_t> out;
    if (w == 1.0) {
        out.resize(n);
        std::iota(out.begin(), out.end(), 0);
        return out;
    }
    const std::size_t m = sample_count(w, n);
    Rng rng{stream_seed};
    out.reserve(m);
    if (w < 1.0) {
        // partial Fisher-Yates: first m slots of a uniform permutation
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t i = 0; i < m; ++i) {
            std::swap(pool[i], pool[i + rng.below(n - i)]);
            out.push_back(pool[i]);
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) out.push_back(rng.below(n));
    }
    return out;
}

std::vector<std::string> resample(const std::vector<std::string>& corpus, double w,
                                  std::uint64_t stream_seed) {
    std::vector<std::string> out;
    for (std::size_t idx : resample_indices(corpus.size(), w, stream_seed))
        out.push_back(corpus[idx]);
    return out;
}

std::vector<MixtureEntry> filter_by_category(const std::vector<MixtureEntry>& entries,
                                             const CategoryMap& map, CategoryFilter mode) {
    std::vector<MixtureEntry> out;
    for (const MixtureEntry& e : entries) {
        auto it = map.find(e.dataset);
        if (it == map.end()) throw UnknownDataset(e.dataset);
        bool is_web = it->second.count(ingest::Category::WebBrowsing) > 0;
        if ((mode == CategoryFilter::WebOnly) == is_web) out.push_back(e);
    }
    return out;
}

MixStats build_mixture(const MixturePlan& plan, const std::string& out_path,
                       std::optional<CategoryFilter> filter) {
    std::vector<MixtureEntry> entries = plan.entries;
    if (filter) entries = filter_by_category(entries, plan.categories, *filter);

    MixStats stats;
    std::vector<std::string> pool;
    for (const MixtureEntry& e : entries) {
        std::vector<std::string> lines = read_jsonl_lines(e.path);
        if (lines.empty()) throw EmptyCorpus(e.dataset);
        std::vector<std::string> sampled =
            resample(lines, e.w, substream_seed(plan.seed, plan.epoch, e.dataset));
        stats.per_dataset[e.dataset] = sampled.size();
        stats.total += sampled.size();
        for (std::string& l : sampled) pool.push_back(std::move(l));
    }

    Rng shuffle_rng{substream_seed(plan.seed, plan.epoch, "")};
    shuffle_in_place(pool, shuffle_rng);
    write_jsonl_lines(out_path, pool);
    return stats;
}

MixturePlan parse_plan(const JsonValue& doc) {
    MixturePlan plan;
    plan.seed = doc.at("seed").get<std::uint64_t>();
    plan.epoch = doc.value("epoch", std::uint64_t{0});
    for (const auto& e : doc.at("entries")) {
        MixtureEntry entry;
        entry.dataset = e.at("dataset").get<std::string>();
        entry.w = e.at("w").get<double>();
        entry.path = e.at("path").get<std::string>();
        if (entry.w <= 0)
            throw std::invalid_argument("multiplier for '" + entry.dataset + "' must be > 0");
        for (const MixtureEntry& seen : plan.entries)
            if (seen.dataset == entry.dataset)
                throw std::invalid_argument("duplicate dataset '" + entry.dataset + "' in plan");
        plan.entries.push_back(std::move(entry));
    }
    if (auto it = doc.find("categories"); it != doc.end()) {
        for (auto cat = it->begin(); cat != it->end(); ++cat) {
            std::set<ingest::Category> cats;
            for (const auto& name : cat.value()) {
                auto c = ingest::category_from_name(name.get<std::string>());
                if (!c)
                    throw std::invalid_argument("unknown category '" +
                                                name.get<std::string>() + "'");
                cats.insert(*c);
            }
            plan.categories[cat.key()] = std::move(cats);
        }
    }
    return plan;
}

MixturePlan load_plan(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open plan file '" + path + "'");
    JsonValue doc = JsonValue::parse(in);
    return parse_plan(doc);
}

}  // namespace adp::mixer
