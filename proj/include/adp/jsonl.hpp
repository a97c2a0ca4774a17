#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace adp {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Calls fn(line_no, line) for every line of a JSONL file. Line numbers start
/// at 1. A trailing newline does not produce an empty final record.
void for_each_jsonl_line(const std::string& path,
                         const std::function<void(std::size_t, const std::string&)>& fn);

std::vector<std::string> read_jsonl_lines(const std::string& path);

/// Writes one record per line, LF endings, no BOM.
void write_jsonl_lines(const std::string& path, const std::vector<std::string>& lines);

}  // namespace adp
