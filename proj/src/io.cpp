#include <sppcso/io.hpp>
#include <sppcso/error.hpp>

#include <zlib.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sppcso::io {

std::string format_double(double v)
{
    if (std::isnan(v)) return "NA";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_file(const std::filesystem::path& path)
{
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (f == nullptr) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::string out;
    char buf[1 << 16];
    int got = 0;
    while ((got = gzread(f, buf, sizeof(buf))) > 0) out.append(buf, static_cast<std::size_t>(got));
    const bool failed = got < 0;
    gzclose(f);
    if (failed) throw Error(ErrorKind::Io, "read error in " + path.string());
    return out;
}

std::vector<std::string> split_line(const std::string& line, char delimiter)
{
    std::vector<std::string> cells;
    std::string cur;
    auto flush = [&] {
        const auto b = cur.find_first_not_of(" \t\r");
        const auto e = cur.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
        cur.clear();
    };
    for (char c : line) {
        if (c == delimiter) {
            flush();
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return cells;
}

namespace {

bool parse_number(const std::string& cell, double& out)
{
    if (cell.empty()) return false;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

char detect_delimiter(const std::string& first_line)
{
    return first_line.find('\t') != std::string::npos ? '\t' : ',';
}

} // namespace

NumericTable read_table(const std::filesystem::path& path, char delimiter)
{
    std::istringstream in(read_file(path));
    std::string line;
    std::vector<std::vector<double>> rows;
    NumericTable table;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (delimiter == '\0') delimiter = detect_delimiter(line);
        auto cells = split_line(line, delimiter);
        std::vector<double> row(cells.size());
        bool numeric = true;
        std::size_t bad = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_number(cells[c], row[c])) {
                numeric = false;
                bad = c;
                break;
            }
        }
        if (!numeric) {
            if (rows.empty() && table.header.empty()) {
                table.header = std::move(cells);
                width = table.header.size();
                continue;
            }
            throw Error(ErrorKind::NonNumericValue, path.string() + " line " + std::to_string(line_no) + ", column " +
                                                        std::to_string(bad + 1) + ": '" + cells[bad] + "'");
        }
        if (width == 0) width = row.size();
        if (row.size() != width) {
            throw Error(ErrorKind::MalformedFile, path.string() + " line " + std::to_string(line_no) + ": expected " +
                                                      std::to_string(width) + " fields, found " +
                                                      std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorKind::MalformedFile, path.string() + ": no data rows");
    table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) table.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return table;
}

Vector read_vector(const std::filesystem::path& path, char delimiter)
{
    const NumericTable t = read_table(path, delimiter);
    if (t.values.cols() == 1) return t.values.col(0);
    if (t.values.rows() == 1) return t.values.row(0).transpose();
    throw Error(ErrorKind::MalformedFile, path.string() + ": expected a single column");
}

void write_text(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string matrix_csv(const Matrix& M, const std::vector<std::string>& header)
{
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) out += ',';
        out += header[j];
    }
    if (!header.empty()) out += '\n';
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            if (j) out += ',';
            out += format_double(M(i, j));
        }
        out += '\n';
    }
    return out;
}

} // namespace sppcso::io
