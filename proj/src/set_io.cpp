#include "spdmean/set_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace spdmean {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_double(std::string_view tok, int line) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("invalid number '" + std::string(tok) + "'", line);
    }
    return x;
}

long parse_int(std::string_view tok, int line) {
    long x = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("invalid integer '" + std::string(tok) + "'", line);
    }
    return x;
}

struct Header {
    long n;
    long k;
};

Header parse_header(std::istream& is, std::string_view magic, int& line_no) {
    std::string line;
    ++line_no;
    if (!std::getline(is, line)) throw ParseError("missing header", line_no);
    const auto tok = split(line);
    if (tok.size() != 4 || tok[0] != magic || tok[1] != "v1" || !tok[2].starts_with("N=") ||
        !tok[3].starts_with("K=")) {
        throw ParseError("expected header '" + std::string(magic) + " v1 N=<n> K=<k>'", line_no);
    }
    const long n = parse_int(tok[2].substr(2), line_no);
    const long k = parse_int(tok[3].substr(2), line_no);
    if (n < 1 || k < 1) throw ParseError("N and K must be positive", line_no);
    return {n, k};
}

std::vector<std::string_view> next_record(std::istream& is, std::string& buffer, int& line_no,
                                          std::size_t expected, const char* what) {
    ++line_no;
    if (!std::getline(is, buffer)) throw ParseError(std::string("missing ") + what, line_no);
    auto tok = split(buffer);
    if (tok.size() != expected) {
        std::ostringstream os;
        os << what << ": expected " << expected << " fields, found " << tok.size();
        throw ParseError(os.str(), line_no);
    }
    return tok;
}

void open_check(const std::ios& s, const std::filesystem::path& p, const char* verb) {
    if (!s) throw IoError(std::string("cannot ") + verb + " " + p.string());
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

void write_spdset(std::ostream& os, const MatrixSet& set) {
    const Eigen::Index n = set.dim();
    os << "spdset v1 N=" << n << " K=" << set.size() << '\n';
    for (std::size_t k = 0; k < set.size(); ++k) {
        os << k;
        const Matrix& m = set.raw()[k];
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j) os << ' ' << format_double(m(i, j));
        os << '\n';
    }
}

MatrixSet read_spdset(std::istream& is) {
    int line_no = 0;
    const Header h = parse_header(is, "spdset", line_no);
    const std::size_t entries = static_cast<std::size_t>(h.n * (h.n + 1) / 2);
    std::vector<SpdMatrix> members;
    members.reserve(static_cast<std::size_t>(h.k));
    std::string buffer;
    for (long k = 0; k < h.k; ++k) {
        const auto tok = next_record(is, buffer, line_no, entries + 1, "matrix record");
        if (parse_int(tok[0], line_no) != k) {
            throw ParseError("expected matrix index " + std::to_string(k), line_no);
        }
        Matrix m(h.n, h.n);
        std::size_t t = 1;
        for (long i = 0; i < h.n; ++i) {
            for (long j = i; j < h.n; ++j) {
                m(i, j) = m(j, i) = parse_double(tok[t++], line_no);
            }
        }
        try {
            members.emplace_back(m);
        } catch (const NotPositiveDefinite& e) {
            throw ParseError(std::string("matrix is not SPD: ") + e.what(), line_no);
        }
    }
    return MatrixSet(std::move(members));
}

void write_spdtruth(std::ostream& os, const GeneratedSet& g) {
    const Eigen::Index n = g.a_true.rows();
    os << "spdtruth v1 N=" << n << " K=" << g.d_true.size() << '\n';
    os << 'A';
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) os << ' ' << format_double(g.a_true(i, j));
    os << '\n';
    for (std::size_t k = 0; k < g.d_true.size(); ++k) {
        os << "D " << k;
        for (Eigen::Index i = 0; i < n; ++i) os << ' ' << format_double(g.d_true[k](i));
        os << '\n';
    }
    os << "rng " << kRngName << '\n';
    os << "regenerated " << g.regenerated << '\n';
}

GroundTruth read_spdtruth(std::istream& is) {
    int line_no = 0;
    const Header h = parse_header(is, "spdtruth", line_no);
    std::string buffer;
    GroundTruth out{Matrix(h.n, h.n), {}};
    auto tok = next_record(is, buffer, line_no, static_cast<std::size_t>(h.n * h.n + 1),
                           "mixing record");
    if (tok[0] != "A") throw ParseError("expected mixing record 'A'", line_no);
    std::size_t t = 1;
    for (long i = 0; i < h.n; ++i)
        for (long j = 0; j < h.n; ++j) out.a_true(i, j) = parse_double(tok[t++], line_no);
    for (long k = 0; k < h.k; ++k) {
        tok = next_record(is, buffer, line_no, static_cast<std::size_t>(h.n + 2), "source record");
        if (tok[0] != "D" || parse_int(tok[1], line_no) != k) {
            throw ParseError("expected source record 'D " + std::to_string(k) + "'", line_no);
        }
        Vector d(h.n);
        for (long i = 0; i < h.n; ++i) d(i) = parse_double(tok[i + 2], line_no);
        out.d_true.push_back(std::move(d));
    }
    return out;
}

void save_spdset(const std::filesystem::path& path, const MatrixSet& set) {
    std::ofstream os(path, std::ios::binary);
    open_check(os, path, "write");
    write_spdset(os, set);
    open_check(os, path, "write");
}

MatrixSet load_spdset(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    open_check(is, path, "read");
    return read_spdset(is);
}

void save_spdtruth(const std::filesystem::path& path, const GeneratedSet& g) {
    std::ofstream os(path, std::ios::binary);
    open_check(os, path, "write");
    write_spdtruth(os, g);
    open_check(os, path, "write");
}

GroundTruth load_spdtruth(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    open_check(is, path, "read");
    return read_spdtruth(is);
}

std::filesystem::path truth_path_for(const std::filesystem::path& set_path) {
    std::filesystem::path p = set_path;
    const std::string ext = p.extension().string();
    p.replace_filename(p.stem().string() + ".truth" + ext);
    return p;
}

}  // namespace spdmean
