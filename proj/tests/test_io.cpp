#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mslab/io.hpp"
#include "support.hpp"

using namespace mslab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mslab_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("atomic writes leave no temporaries behind") {
    TempDir dir;
    const fs::path target = dir.path / "note.txt";
    atomic_write_text(target, "first");
    CHECK(slurp(target) == "first");
    atomic_write_text(target, "second");
    CHECK(slurp(target) == "second");
    std::size_t entries = 0;
    for (const auto& e : fs::directory_iterator(dir.path)) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1);
}

TEST_CASE("sample CSV round trips bit-exactly") {
    TempDir dir;
    std::mt19937_64 rng(5);
    BoundaryFunction f = support::random_trig(CircleGrid(32), 10, rng);
    const fs::path p = dir.path / "f.csv";
    write_samples_csv(p, f);
    BoundaryFunction back = read_samples_csv(p);
    REQUIRE(back.size() == f.size());
    for (std::size_t j = 0; j < f.size(); ++j)
        CHECK(back.samples()[j] == f.samples()[j]);
}

TEST_CASE("sample CSV validation") {
    TempDir dir;
    const fs::path p = dir.path / "bad.csv";

    atomic_write_text(p, "x,theta,re,im\n");
    CHECK_THROWS_AS(read_samples_csv(p), ValidationError);

    atomic_write_text(p, "j,theta,re,im\n0,0.0,1.0\n");
    CHECK_THROWS_AS(read_samples_csv(p), ValidationError);

    // Indices out of order.
    std::ostringstream swapped;
    BoundaryFunction f = BoundaryFunction::sample(CircleGrid(16),
                                                  [](cplx z) { return z; });
    write_samples_csv(dir.path / "ok.csv", f);
    std::istringstream ok(slurp(dir.path / "ok.csv"));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(ok, line)) lines.push_back(line);
    std::swap(lines[1], lines[2]);
    for (const std::string& l : lines) swapped << l << "\n";
    atomic_write_text(p, swapped.str());
    CHECK_THROWS_AS(read_samples_csv(p), ValidationError);

    // 24 rows is not a power of two.
    std::ostringstream odd;
    odd << "j,theta,re,im\n";
    for (int j = 0; j < 24; ++j)
        odd << j << "," << (6.283185307179586 * j / 24) << ",1,0\n";
    atomic_write_text(p, odd.str());
    CHECK_THROWS_AS(read_samples_csv(p), ValidationError);

    CHECK_THROWS_AS(read_samples_csv(dir.path / "missing.csv"), ValidationError);
}

TEST_CASE("coefficient and matrix CSV formats are stable") {
    TempDir dir;
    Eigen::VectorXcd c(2);
    c << cplx(1.0, 2.0), cplx(-3.0, 0.0);
    write_coeffs_csv(dir.path / "c.csv", c);
    CHECK(slurp(dir.path / "c.csv") == "k,re,im\n0,1,2\n1,-3,0\n");

    Eigen::MatrixXcd m(1, 2);
    m << cplx(0.0, 1.0), cplx(0.5, 0.0);
    write_matrix_csv(dir.path / "m.csv", m);
    CHECK(slurp(dir.path / "m.csv") == "row,col,re,im\n0,0,0,1\n0,1,0.5,0\n");
}

TEST_CASE("probe CSV overloads carry points and values") {
    TempDir dir;
    std::vector<AdcSample> kernels{{0, cplx(0.5, 0.25), 2.0}};
    write_probe_csv(dir.path / "k.csv", kernels);
    const std::string ks = slurp(dir.path / "k.csv");
    CHECK(ks.find("depth,ray,re,im,norm_sq") == 0);
    CHECK(ks.find("0.5") != std::string::npos);

    std::vector<ProbeSample> probes{{1, 2, cplx(0.9, 0.0), cplx(0.25, -0.5)}};
    write_probe_csv(dir.path / "p.csv", probes);
    const std::string ps = slurp(dir.path / "p.csv");
    CHECK(ps.find("-0.5") != std::string::npos);
}
