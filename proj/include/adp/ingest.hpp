#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "adp/types.hpp"

namespace adp::ingest {

struct RawRecord {
    std::string source_dataset;
    JsonValue payload;
    std::size_t line_no = 1;
};

enum class Category { Coding, SoftwareEngineering, ToolUse, WebBrowsing };

const char* category_name(Category c);
std::optional<Category> category_from_name(const std::string& name);

struct AdapterDescriptor {
    std::string name;
    std::string accepts;
    std::set<Category> categories;
};

/// Raised when a raw record cannot be mapped to a trajectory. `reason` is a
/// short machine-readable code counted in IngestStats.rejection_reasons.
class ConvertError : public std::runtime_error {
public:
    ConvertError(std::string reason, const std::string& message)
        : std::runtime_error(reason + ": " + message), reason_(std::move(reason)) {}

    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
};

using AdapterFn = std::function<Trajectory(const RawRecord&)>;

class AdapterRegistry {
public:
    void add(AdapterDescriptor descriptor, AdapterFn fn);
    const AdapterFn* find(const std::string& name) const;
    const AdapterDescriptor* descriptor(const std::string& name) const;
    std::vector<AdapterDescriptor> list() const;

private:
    struct Entry {
        AdapterDescriptor descriptor;
        AdapterFn fn;
    };
    std::map<std::string, Entry> entries_;
};

/// Registry pre-loaded with the three reference adapters
/// (rf_chat, rf_web, rf_rollout).
const AdapterRegistry& builtin_registry();

// Reference adapters. Each is a pure record -> trajectory function.
Trajectory convert_chat(const RawRecord& record);
Trajectory convert_webdemo(const RawRecord& record);
Trajectory convert_rollout(const RawRecord& record);

struct IngestStats {
    std::size_t read = 0;
    std::size_t converted = 0;
    std::size_t rejected = 0;
    std::map<std::string, std::size_t> rejection_reasons;
};

struct IngestOptions {
    std::optional<std::string> reject_log_path;  // JSONL of {line_no, reason}
};

/// Streams raw JSONL through the named adapter, lenient-validates every
/// produced trajectory and writes accepted ones to output_path in input
/// order. Bad records are counted and skipped, never fatal.
IngestStats run_ingest(const std::string& input_path, const std::string& adapter_name,
                       const std::string& output_path,
                       const AdapterRegistry& registry = builtin_registry(),
                       const IngestOptions& options = {});

}  // namespace adp::ingest
