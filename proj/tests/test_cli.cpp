#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "t2x/io.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path p = [] {
    auto d = fs::temp_directory_path() / ("t2x_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

struct Result {
  int code;
  std::string err;
};

Result cli(const std::string& args) {
  const char* exe = std::getenv("T2X_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "T2X_CLI must point at the t2x binary");
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string(exe) + " " + args + " > /dev/null 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, t2x::read_text_file(err)};
}

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  t2x::write_text_file(p, text);
  return p;
}

std::vector<std::vector<std::string>> rows(const fs::path& csv) {
  std::vector<std::vector<std::string>> out;
  for (const auto& line : t2x::detail::split(t2x::read_text_file(csv), '\n'))
    if (!line.empty())
      out.push_back(t2x::detail::split(line, ','));
  return out;
}

double meta_value(const fs::path& p, const std::string& key) {
  const auto m = t2x::parse_metadata(t2x::read_text_file(p));
  const auto* v = m.find(key);
  REQUIRE_MESSAGE(v != nullptr, key);
  return std::stod(*v);
}

/// x1 of local maxima above half the image peak.
std::vector<double> image_peaks(const fs::path& csv) {
  const auto r = rows(csv);
  std::vector<double> x, v;
  for (std::size_t i = 1; i < r.size(); ++i) {
    x.push_back(std::stod(r[i][0]));
    v.push_back(std::stod(r[i][1]));
  }
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] >= 0.5 && v[i] > v[i - 1] && v[i] >= v[i + 1])
      peaks.push_back(x[i]);
  return peaks;
}

} // namespace

TEST_CASE("correlate writes the documented file set quickly") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = cli("correlate --out " + (scratch() / "c8").string() + " --threads 8");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  REQUIRE(r.code == 0);
  CHECK(secs < 60.0);
  for (const char* f : {"cmap.csv", "cmap.meta", "metrics.csv"})
    CHECK(fs::exists(scratch() / "c8" / f));
  CHECK_FALSE(fs::exists(scratch() / "c8" / "cmap_matrix.csv"));
  const auto csv = rows(scratch() / "c8" / "cmap.csv");
  CHECK(csv.front() == std::vector<std::string>{"x1_um", "t2_fs", "C_norm"});
  CHECK(csv.size() == 1 + 101 * 1024);

  const auto meta = t2x::parse_metadata(t2x::read_text_file(scratch() / "c8" / "cmap.meta"));
  for (const char* k : {"config.pump.tau_p_fs", "config.grid.n_fft", "raw_peak", "path", "grid.n_omega2",
                        "nondeterministic.generated_at_utc"})
    CHECK_MESSAGE(meta.find(k) != nullptr, k);
}

TEST_CASE("outputs are byte-identical across runs and worker counts") {
  REQUIRE(cli("correlate --out " + (scratch() / "c1").string() + " --threads 1").code == 0);
  REQUIRE(cli("correlate --out " + (scratch() / "c2").string() + " --threads 2").code == 0);
  if (!fs::exists(scratch() / "c8" / "cmap.csv"))
    REQUIRE(cli("correlate --out " + (scratch() / "c8").string() + " --threads 8").code == 0);
  for (const char* f : {"cmap.csv", "metrics.csv"}) {
    const auto a = t2x::read_text_file(scratch() / "c1" / f);
    CHECK(a == t2x::read_text_file(scratch() / "c2" / f));
    CHECK(a == t2x::read_text_file(scratch() / "c8" / f));
  }
}

TEST_CASE("matrix export") {
  const auto cfg = write("matrix.cfg", "[output]\nmatrix = true\n[grid]\nn_x1 = 11\n");
  REQUIRE(cli("correlate --config " + cfg.string() + " --out " + (scratch() / "m").string()).code == 0);
  const auto r = rows(scratch() / "m" / "cmap_matrix.csv");
  CHECK(r.size() == 12);
  CHECK(r.front().size() == 1025);
}

TEST_CASE("compare reports the regime constant") {
  REQUIRE(cli("compare --out " + (scratch() / "cmp").string()).code == 0);
  const double k = meta_value(scratch() / "cmp" / "report.txt", "model.regime_constant_2D_sigma_nu_sigma_p");
  CHECK(std::abs(k - 0.57) <= 0.01);
  CHECK(fs::exists(scratch() / "cmp" / "fwhm_compare.csv"));
}

TEST_CASE("gauss and phimap file sets") {
  REQUIRE(cli("gauss --out " + (scratch() / "g").string()).code == 0);
  CHECK(fs::exists(scratch() / "g" / "gmap.csv"));
  CHECK(fs::exists(scratch() / "g" / "gauss.meta"));
  const auto cfg = write("phi.cfg", "[phimap]\nn_q = 41\nn_omega = 51\n");
  REQUIRE(cli("phimap --config " + cfg.string() + " --out " + (scratch() / "phi").string()).code == 0);
  CHECK(rows(scratch() / "phi" / "phimap.csv").size() == 1 + 41 * 51);
  CHECK(meta_value(scratch() / "phi" / "phimap.meta", "invalid_points") > 0);
}

TEST_CASE("sweep over pump duration") {
  REQUIRE(cli("sweep --out " + (scratch() / "sw").string() + " --key pump.tau_p_fs --values 100,200,400").code == 0);
  const auto r = rows(scratch() / "sw" / "sweep.csv");
  REQUIRE(r.size() == 4);
  CHECK(r[0][7] == "resolution_time_fs");
  const double a = std::stod(r[1][7]), b = std::stod(r[2][7]), c = std::stod(r[3][7]);
  CHECK(a < b);
  CHECK(b < c);
  CHECK(std::stod(r[1][0]) == 100.0);
}

TEST_CASE("ghost images of temporal gates") {
  if (!fs::exists(scratch() / "c8" / "cmap.meta"))
    REQUIRE(cli("correlate --out " + (scratch() / "c8").string()).code == 0);
  const double slope = meta_value(scratch() / "c8" / "cmap.meta", "metrics.ridge_slope_fs_per_um");
  const double t0 = meta_value(scratch() / "c8" / "cmap.meta", "metrics.ridge_intercept_fs") +
                    slope * 1000.0; // ridge time at x1 = 1000 µm

  auto gate = [](double c, double w) {
    return std::to_string(c - w - 1) + ",0\n" + std::to_string(c - w) + ",1\n" + std::to_string(c + w) + ",1\n" +
           std::to_string(c + w + 1) + ",0\n";
  };

  const auto one = write("one.csv", "t_fs,T\n" + gate(t0, 10));
  REQUIRE(cli("image --object " + one.string() + " --out " + (scratch() / "i1").string()).code == 0);
  CHECK(image_peaks(scratch() / "i1" / "image.csv").size() == 1);

  const double t1 = t0 - 1000.0;
  const auto two = write("two.csv", "t_fs,T\n" + gate(t1, 10) + gate(t0, 10));
  REQUIRE(cli("image --object " + two.string() + " --out " + (scratch() / "i2").string()).code == 0);
  const auto p = image_peaks(scratch() / "i2" / "image.csv");
  REQUIRE(p.size() == 2);
  const double expected = 1000.0 / std::abs(slope);
  CHECK(std::abs(p[1] - p[0]) == doctest::Approx(expected).epsilon(0.1));

  const auto zero = write("zero.csv", "t_fs,T\n-1e5,0\n1e5,0\n");
  REQUIRE(cli("image --object " + zero.string() + " --out " + (scratch() / "i0").string()).code == 0);
  const auto meta = t2x::parse_metadata(t2x::read_text_file(scratch() / "i0" / "image.meta"));
  CHECK(*meta.find("no_signal") == "true");
  for (const auto& row : rows(scratch() / "i0" / "image.csv"))
    if (row[0] != "x1_um")
      CHECK(row[1] == "0");
}

TEST_CASE("exit codes and single-line machine-readable errors") {
  const auto bad = write("bad.cfg", "[pump]\ntau_p_fs = -5\n");
  auto r = cli("correlate --config " + bad.string() + " --out " + (scratch() / "e2").string());
  CHECK(r.code == 2);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["key"] == "pump.tau_p_fs");
  CHECK(j["exit_code"] == 2);
  CHECK((!fs::exists(scratch() / "e2") || fs::is_empty(scratch() / "e2")));

  CHECK(cli("correlate --out " + (scratch() / "e").string() + " --path slow").code == 2);
  CHECK(cli("frobnicate --out " + (scratch() / "e").string()).code == 2);
  CHECK(cli("image --out " + (scratch() / "e").string()).code == 2);

  const auto uv = write("uv.cfg", "[crystal]\npump_wavelength_nm = 300\n");
  r = cli("correlate --config " + uv.string() + " --out " + (scratch() / "e3").string());
  CHECK(r.code == 3);
  CHECK(nlohmann::json::parse(r.err)["error"] == "domain");

  CHECK(cli("correlate --config /nonexistent.cfg --out " + (scratch() / "e4").string()).code == 4);
  const auto file = write("plainfile", "x");
  CHECK(cli("gauss --out " + (file / "sub").string()).code == 4);
}
