#include "irs/path_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace irs {

namespace {

double parse_field(std::string_view s, std::size_t line_no) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("path CSV line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
    return v;
}

}  // namespace

void write_path_csv(std::ostream& out, const SamplePath& path) {
    const auto old = out.precision(17);
    out << "t,value\n";
    for (std::size_t k = 0; k < path.values.size(); ++k) out << path.t(k) << ',' << path.values[k] << '\n';
    out.precision(old);
}

SamplePath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("path CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,value") throw std::runtime_error("path CSV: expected header 't,value'");
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("path CSV line " + std::to_string(line_no) + ": expected 't,value'");
        (void)parse_field(std::string_view(line).substr(0, comma), line_no);
        values.push_back(parse_field(std::string_view(line).substr(comma + 1), line_no));
    }
    return make_external_path(std::move(values));
}

}  // namespace irs
