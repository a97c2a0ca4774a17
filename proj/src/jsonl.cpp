#include "adp/jsonl.hpp"

#include <fstream>

namespace adp {

void for_each_jsonl_line(const std::string& path,
                         const std::function<void(std::size_t, const std::string&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        fn(line_no, line);
    }
}

std::vector<std::string> read_jsonl_lines(const std::string& path) {
    std::vector<std::string> lines;
    for_each_jsonl_line(path, [&](std::size_t, const std::string& l) { lines.push_back(l); });
    return lines;
}

void write_jsonl_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    for (const std::string& l : lines) {
        out << l << '\n';
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace adp
