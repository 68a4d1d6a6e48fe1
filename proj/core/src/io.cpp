#include "mslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mslab/errors.hpp"

namespace mslab {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void append_complex(std::string& out, cplx v) {
    out += fmt(v.real());
    out += ',';
    out += fmt(v.imag());
}

std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open CSV file: " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size())
        throw ValidationError("malformed numeric CSV field: " + s);
    return v;
}

} // namespace

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path dir =
        path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::filesystem::create_directories(dir);
    const std::filesystem::path tmp = dir / (".tmp-" + path.filename().string());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ValidationError("cannot open temporary file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw ValidationError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_samples_csv(const std::filesystem::path& path, const BoundaryFunction& f) {
    std::string out = "j,theta,re,im\n";
    for (std::size_t j = 0; j < f.size(); ++j) {
        out += std::to_string(j);
        out += ',';
        out += fmt(f.grid().theta(j));
        out += ',';
        append_complex(out, f.samples()[j]);
        out += '\n';
    }
    atomic_write_text(path, out);
}

BoundaryFunction read_samples_csv(const std::filesystem::path& path) {
    const auto rows = read_csv_rows(path);
    if (rows.empty() || rows.front() != std::vector<std::string>{"j", "theta", "re", "im"})
        throw ValidationError("sample CSV must start with header j,theta,re,im");
    const std::size_t n = rows.size() - 1;
    for (std::size_t j = 0; j < n; ++j)
        if (rows[j + 1].size() != 4)
            throw ValidationError("sample CSV rows need 4 fields");
    // A row count the grid rejects is a malformed file, not a caller bug.
    if (n < 16 || (n & (n - 1)) != 0)
        throw ValidationError("sample CSV row count must be a power of two >= 16");
    CircleGrid grid(n);
    std::vector<cplx> samples(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& row = rows[j + 1];
        if (parse_double(row[0]) != static_cast<double>(j))
            throw ValidationError("sample CSV rows must be indexed 0..N-1 in order");
        if (std::abs(parse_double(row[1]) - grid.theta(j)) > 1e-9)
            throw ValidationError("sample CSV angle does not match the uniform grid");
        samples[j] = cplx(parse_double(row[2]), parse_double(row[3]));
    }
    return BoundaryFunction(grid, std::move(samples));
}

void write_coeffs_csv(const std::filesystem::path& path, const Eigen::VectorXcd& coeffs) {
    std::string out = "k,re,im\n";
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        append_complex(out, coeffs(k));
        out += '\n';
    }
    atomic_write_text(path, out);
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXcd& m) {
    std::string out = "row,col,re,im\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out += std::to_string(r);
            out += ',';
            out += std::to_string(c);
            out += ',';
            append_complex(out, m(r, c));
            out += '\n';
        }
    }
    atomic_write_text(path, out);
}

void write_probe_csv(const std::filesystem::path& path,
                     const std::vector<AdcSample>& samples) {
    std::string out = "depth,ray,re,im,norm_sq\n";
    for (const AdcSample& s : samples) {
        out += fmt(1.0 - std::abs(s.point));
        out += ',';
        out += std::to_string(s.ray);
        out += ',';
        append_complex(out, s.point);
        out += ',';
        out += fmt(s.norm_sq);
        out += '\n';
    }
    atomic_write_text(path, out);
}

void write_probe_csv(const std::filesystem::path& path,
                     const std::vector<ProbeSample>& samples) {
    std::string out = "depth,ray,re,im,norm_sq\n";
    for (const ProbeSample& s : samples) {
        out += fmt(1.0 - std::abs(s.point));
        out += ',';
        out += std::to_string(s.ray);
        out += ',';
        append_complex(out, s.value);
        out += ',';
        out += fmt(std::norm(s.value));
        out += '\n';
    }
    atomic_write_text(path, out);
}

} // namespace mslab
