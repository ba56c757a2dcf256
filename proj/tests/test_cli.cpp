#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "amo/diophantine.hpp"
#include "amo/periodic.hpp"
#include "amo_app/cli.hpp"
#include "amo_app/export.hpp"

using namespace amo;
using namespace amo::app;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(f);
  if (!line.empty() && line.back() == ',') v.emplace_back();
  return v;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("amo_test_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("bands examples") {
  const auto r = run({"bands", "--lambda", "0.5", "--p", "1", "--q", "5", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  CHECK(l.front() == "lambda,p,q,k,sigma_lo,inner_lo,inner_hi,sigma_hi");
  CHECK(l.size() == 6);
  CHECK(r.err.find("|sigma|=") != std::string::npos);

  const auto one = run({"bands", "--lambda", "0.5", "--p", "0", "--q", "1"});
  REQUIRE(one.code == 0);
  CHECK(lines(one.out).at(1) == "0.5,0,1,1,-3,-1,1,3");

  const auto big = run({"bands", "--lambda", "1.5", "--p", "1", "--q", "3"});
  REQUIRE(big.code == 0);
  const auto rows = lines(big.out);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    REQUIRE(f.size() == 8);
    CHECK(f[5].empty());
    CHECK(f[6].empty());
    CHECK_FALSE(f[4].empty());
  }
}

TEST_CASE("band CSV round-trips exactly") {
  for (auto [lambda, p, q] : {std::tuple{0.5, 3, 8}, std::tuple{0.9, 5, 13}, std::tuple{1.5, 1, 3}}) {
    const auto spec = band_spectrum(lambda, p, q);
    std::stringstream ss;
    write_bands_csv(ss, band_rows(spec));
    const auto back = read_bands_csv(ss);
    const auto sa = sigma_set(back), sb = spec.sigma_set();
    const auto a = sa.intervals(), b = sb.intervals();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].lo == b[i].lo);
      CHECK(a[i].hi == b[i].hi);
    }
    const auto sc = inner_set(back), sd = spec.inner_set();
    const auto c = sc.intervals(), d = sd.intervals();
    REQUIRE(c.size() == d.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(c[i].lo == d[i].lo);
      CHECK(c[i].hi == d[i].hi);
    }
  }

  // X in the in_X column.
  const auto spec = band_spectrum(0.5, 3, 8);
  const auto x = build_X(spec, explicit_window(8, 3, 7));
  REQUIRE_FALSE(x.empty());
  std::stringstream ss;
  write_bands_csv(ss, band_rows(spec, &x));
  std::vector<Interval> pieces;
  for (const auto& row : read_bands_csv(ss)) pieces.insert(pieces.end(), row.in_x.begin(), row.in_x.end());
  const IntervalSet back(pieces);
  REQUIRE(back.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(back.intervals()[i].lo == x.intervals()[i].lo);
    CHECK(back.intervals()[i].hi == x.intervals()[i].hi);
  }

  std::stringstream bad("lambda,p,q\n1,2,3\n");
  CHECK_THROWS_AS(read_bands_csv(bad), std::runtime_error);
}

TEST_CASE("butterfly counts, symmetry and SVG") {
  const auto one = run({"butterfly", "--q-max", "1"});
  REQUIRE(one.code == 0);
  CHECK(lines(one.out).size() == 2);

  // Sum over q <= 5 of q times the number of p in [0, q) coprime to q.
  std::size_t expected = 0;
  for (std::int64_t q = 1; q <= 5; ++q)
    for (std::int64_t p = 0; p < q; ++p) expected += std::gcd(p, q) == 1 ? static_cast<std::size_t>(q) : 0;
  CHECK(expected == 37);
  const auto rows = butterfly(1.0, 5);
  CHECK(rows.size() == expected);
  const auto five = run({"butterfly", "--q-max", "5", "--lambda", "1"});
  CHECK(lines(five.out).size() == expected + 1);

  // E -> -E within each fraction.
  for (std::size_t i = 0; i < rows.size();) {
    const auto q = static_cast<std::size_t>(rows[i].q);
    for (std::size_t k = 0; k < q; ++k) {
      CHECK(std::abs(rows[i + k].sigma_lo + rows[i + q - 1 - k].sigma_hi) < 1e-9);
    }
    i += q;
  }

  const auto svg_path = temp_file("butterfly.svg");
  const auto a = run({"butterfly", "--q-max", "8", "--svg", svg_path.string()});
  REQUIRE(a.code == 0);
  const std::string svg = slurp(svg_path);
  CHECK(svg.find("viewBox=\"0 0 1000 1000\"") != std::string::npos);
  std::size_t segments = 0;
  for (std::size_t pos = 0; (pos = svg.find("<line ", pos)) != std::string::npos; ++pos) ++segments;
  CHECK(segments == lines(a.out).size() - 1);
  const auto b = run({"butterfly", "--q-max", "8", "--svg", svg_path.string(), "--threads", "3"});
  CHECK(b.out == a.out);
  CHECK(slurp(svg_path) == svg);
  std::filesystem::remove(svg_path);

  CHECK(run({"butterfly", "--q-max", "101"}).code == kExitUsage);
}

TEST_CASE("ids, lyapunov and pq examples") {
  const auto r = run({"ids", "--lambda", "0", "--p", "0", "--q", "1", "--E", "0"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).at(1) == "0,0.5");

  const auto ly = run({"lyapunov", "--lambda", "0.5", "--p", "1", "--q", "3", "--energies", "4", "--n-steps", "2000"});
  REQUIRE(ly.code == 0);
  const auto l = lines(ly.out);
  CHECK(l.front() == "E,L_thouless,L_cocycle,abs_diff");
  CHECK(l.size() == 5);

  const auto pq = run({"pq", "--q", "8", "--c", "0.7", "--rho", "0.25"});
  REQUIRE(pq.code == 0);
  // Window 5 <= b <= 16: the scan's first hit is b = 5 with a = 4 b rho = 5.
  const auto w = make_window(8, 0.7);
  std::int64_t scan_a = 0, scan_b = 0;
  for (std::int64_t b = w.b_lo; b <= w.b_hi && !scan_b; ++b)
    for (std::int64_t a = 1; a <= 2 * b; a += 2)
      if (std::abs(4.0 * b * 0.25 - a) < 10.0 / b) {
        scan_a = a;
        scan_b = b;
        break;
      }
  CHECK(lines(pq.out).at(1) == "8,0.69999999999999996,0.25,true," + std::to_string(scan_a) + "," + std::to_string(scan_b));

  const auto js = run({"pq", "--q", "8", "--c", "0.7", "--format", "json"});
  REQUIRE(js.code == 0);
  CHECK(js.out.find("\"intervals\"") != std::string::npos);
  CHECK(js.out.find("\"q\": 8") != std::string::npos);
}

TEST_CASE("x-set and orbit") {
  const auto x = run({"x-set", "--beta", "0.25", "--lambda", "0.5"});
  REQUIRE(x.code == 0);
  const auto rows = lines(x.out);
  CHECK(rows.front().find(",in_X") != std::string::npos);
  CHECK(rows.size() == 30);

  // First X piece: its midpoint has a witness in the default window.
  std::string mid;
  for (std::size_t i = 1; i < rows.size() && mid.empty(); ++i) {
    const auto f = fields(rows[i]);
    if (f.size() == 9 && !f[8].empty()) {
      const auto colon = f[8].find(':'), bar = f[8].find('|');
      const double lo = std::stod(f[8].substr(0, colon));
      const double hi = std::stod(f[8].substr(colon + 1, bar == std::string::npos ? std::string::npos : bar - colon - 1));
      mid = fmt(0.5 * (lo + hi));
    }
  }
  REQUIRE_FALSE(mid.empty());
  const auto o = run({"orbit", "--beta", "0.25", "--lambda", "0.5", "--E", mid, "--theta", "0.1"});
  REQUIRE(o.code == 0);
  CHECK(o.out.find("\"q\": 29") != std::string::npos);
  CHECK(o.out.find("\"q_fine\": 1432") != std::string::npos);
  CHECK(o.out.find("\"mismatch\": false") != std::string::npos);
  CHECK(o.out.find("runtime") == std::string::npos);
  CHECK(run({"orbit", "--beta", "0.25", "--lambda", "0.5", "--E", mid, "--timing"}).out.find("runtime_seconds") !=
        std::string::npos);

  const auto outside = run({"orbit", "--p", "2", "--q", "5", "--E", "5", "--b", "5", "--a", "3"});
  CHECK(outside.code == kExitModule);
  CHECK(outside.err.find("[renorm]") != std::string::npos);
}

TEST_CASE("validation and module errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frob"}).code == kExitUsage);
  CHECK(run({"bands", "--lambda", "-1", "--q", "3"}).code == kExitUsage);
  CHECK(run({"bands", "--lambda", "nan", "--q", "3"}).code == kExitUsage);
  CHECK(run({"bands", "--lambda", "x", "--q", "3"}).code == kExitUsage);
  CHECK(run({"bands", "--lambda", "0.5"}).code == kExitUsage);
  CHECK(run({"bands", "--q", "3", "--beta", "1"}).code == kExitUsage);
  CHECK(run({"bands", "--q", "3", "extra"}).code == kExitUsage);
  CHECK(run({"ids", "--q", "3"}).code == kExitUsage);
  CHECK(run({"pq", "--q", "8"}).code == kExitUsage);
  CHECK(run({"pq", "--q", "8", "--c", "0.7", "--rho", "0.7"}).code == kExitUsage);
  CHECK(run({"verify", "nonsense"}).code == kExitUsage);
  CHECK(run({"bands", "--format", "xml", "--q", "3"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);

  const auto nonreduced = run({"bands", "--p", "2", "--q", "4"});
  CHECK(nonreduced.code == kExitModule);
  CHECK(nonreduced.err.find("[periodic]") != std::string::npos);
  const auto huge = run({"pq", "--q", "200", "--c", "1"});
  CHECK(huge.code == kExitModule);
  CHECK(huge.err.find("[diophantine]") != std::string::npos);
}

TEST_CASE("config file and environment") {
  const auto path = temp_file("cfg.txt");
  {
    std::ofstream f(path);
    f << "lambda=0.25\np=2\nq=5\nformat=json\n";
  }
  const auto from_file = run({"bands", "--config", path.string()});
  const auto from_flags = run({"bands", "--lambda", "0.25", "--p", "2", "--q", "5", "--format", "json"});
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out == from_flags.out);
  {
    std::ofstream f(path);
    f << "quotients=1,1,3\nE=0.1,0.2\nm-samples=32\n";
  }
  const auto list = run({"ids", "--config", path.string()});
  REQUIRE(list.code == 0);
  CHECK(lines(list.out).size() == 3);
  {
    std::ofstream f(path);
    f << "lambda=0.25\nbogus=3\n";
  }
  const auto unknown = run({"bands", "--q", "3", "--config", path.string()});
  CHECK(unknown.code == kExitUsage);
  CHECK(unknown.err.find("bogus") != std::string::npos);
  std::filesystem::remove(path);

  setenv("AMO_THREADS", "many", 1);
  CHECK(run({"bands", "--q", "3"}).code == kExitUsage);
  setenv("AMO_THREADS", "3", 1);
  const auto a = run({"bands", "--q", "13", "--p", "5", "--threads", "1"});
  unsetenv("AMO_THREADS");
  const auto b = run({"bands", "--q", "13", "--p", "5", "--threads", "1"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("output files are byte-identical across runs") {
  const auto p1 = temp_file("a.csv"), p2 = temp_file("b.csv");
  REQUIRE(run({"butterfly", "--q-max", "12", "--lambda", "0.7", "--out", p1.string(), "--threads", "1"}).code == 0);
  REQUIRE(run({"butterfly", "--q-max", "12", "--lambda", "0.7", "--out", p2.string(), "--threads", "4"}).code == 0);
  CHECK(slurp(p1) == slurp(p2));
  CHECK_FALSE(slurp(p1).empty());
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
  CHECK(run({"bands", "--p", "1", "--q", "3", "--out", "/nonexistent/dir/x.csv"}).code == kExitUsage);
}

TEST_CASE("verify all exits 0") {
  const auto r = run({"verify", "all", "--lambda", "0.5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("\"lemma_id\": \"avera_proxy\"") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  const auto one = run({"verify", "pq_measure_trend"});
  CHECK(one.code == kExitOk);
  CHECK(one.out.find("sigma_measure") == std::string::npos);
}
