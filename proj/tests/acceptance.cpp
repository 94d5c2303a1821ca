// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.

#include "ncdil/commands.hpp"
#include "ncdil/dilation.hpp"
#include "ncdil/freemodel.hpp"
#include "ncdil/pathext.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ncdil;

namespace {

struct Run {
  int code = 0;
  std::vector<ResultRecord> records;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const CommandOutcome o = run_command(args, out, err);
  return {o.exit_code, o.records, err.str()};
}

std::string fmt(double v, int digits = 7) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!v.pass) ++failures;
  std::printf("%s [%2d] %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str(), secs);
  std::fflush(stdout);
}

double detail(const ResultRecord& r, const std::string& key) { return r.details.at(key).get<double>(); }

std::string write_theta(const std::string& name, const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "ncdil_acceptance";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p) << body;
  return p.string();
}

template <class Point>
std::string path_checks(const GridPathOracle<Point>& g, std::uint64_t seed, bool& ok) {
  const PairAudit a = audit_pair_bound(g, 1000, seed);
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> log_eps(-6.0, -2.0);
  int broken = 0;
  for (int i = 0; i < 100; ++i) {
    const double t = unit(rng);
    const double e1 = std::pow(10.0, log_eps(rng));
    const double e2 = std::pow(10.0, log_eps(rng));
    const auto x = extend(g, t, e1);
    const auto y = extend(g, t, e2);
    if (!(g.metric(x.point, y.point) <= e1 + e2)) ++broken;
    if (!(g.metric(extend(g, t, e1).point, x.point) == 0.0)) ++broken;
  }
  ok = ok && a.samples == 1000 && a.violations == 0 && broken == 0;
  return "ratio " + fmt(a.max_ratio, 4) + "/" + fmt(a.constant, 4) + " consistency breaks " + std::to_string(broken);
}

}  // namespace

int main() {
  criterion(1, "d=3 lower bound at theta=6pi/7", [] {
    const Run r = cli({"--threads", "1", "c3-bound", "--m", "3", "--n", "7", "--threshold", "1.858"});
    if (r.records.empty()) return Verdict{false, "no record, exit " + std::to_string(r.code)};
    const ResultRecord& rec = r.records[0];
    const bool ok = r.code == kExitOk && rec.bound_kind == "certified_lower" && rec.value >= 1.858 &&
                    rec.runtime_ms <= 120'000;
    return Verdict{ok, "certified lower " + fmt(rec.value) + " >= 1.858, " + std::to_string(rec.runtime_ms) + " ms"};
  });

  criterion(2, "d=2 landmark at theta=2pi(sqrt2-1)", [] {
    const Run r = cli({"ctheta", "--theta-frac", fmt(std::numbers::sqrt2 - 1.0, 17), "--max-denominator", "200"});
    if (r.code != kExitOk || r.records.empty()) return Verdict{false, "exit " + std::to_string(r.code) + " " + r.err};
    const ResultRecord& rec = r.records[0];
    const double diff = std::abs(rec.value - 1.5437772);
    const bool ok = diff <= 5e-3 && rec.runtime_ms <= 300'000;
    return Verdict{ok, "convergent " + rec.details.at("convergent").get<std::string>() + ", transferred " +
                           fmt(rec.value) + " +- " + fmt(rec.error_bound, 3) + ", |diff| " + fmt(diff, 3)};
  });

  criterion(3, "anticommuting pair gives sqrt 2", [] {
    const Run r = cli({"ctheta", "--m", "1", "--n", "2", "--grid", "1e-3"});
    if (r.code != kExitOk || r.records.empty()) return Verdict{false, "exit " + std::to_string(r.code)};
    const ResultRecord& rec = r.records[0];
    const double diff = std::abs(rec.value - std::numbers::sqrt2);
    const bool ok = diff <= 1e-6 && rec.error_bound <= 1e-6;
    return Verdict{ok, "c = " + fmt(rec.value, 12) + " +- " + fmt(rec.error_bound, 3)};
  });

  criterion(4, "closed-form constants for d=2..10", [] {
    const Run r = cli({"constants", "--d-max", "10"});
    double worst = 0;
    bool ok = r.code == kExitOk && r.records.size() == 10;
    for (const auto& rec : r.records) {
      const int d = rec.params.at("d").get<int>();
      if (d < 2) continue;
      const double dd = d;
      worst = std::max({worst, std::abs(rec.value - dd / std::sqrt(2 * dd - 1)),
                        std::abs(detail(rec, "c_f0_lower") - 2 * std::sqrt(1 - 1 / dd)),
                        std::abs(detail(rec, "c_f0_upper") - 2 * std::sqrt(1 - 1 / (2 * dd))),
                        std::abs(detail(rec, "c_uf") * detail(rec, "c_f0_upper") - std::sqrt(2 * dd)),
                        detail(rec, "identity_residual")});
    }
    ok = ok && worst <= 1e-12;
    return Verdict{ok, "max deviation " + fmt(worst, 3)};
  });

  criterion(5, "T_d of commuting diagonal tuples squares to d I", [] {
    double worst = 0;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    for (int d = 1; d <= 5; ++d) {
      std::vector<ComplexMatrix> u;
      for (int i = 0; i < d; ++i) {
        ComplexMatrix m = ComplexMatrix::Zero(4, 4);
        for (Index k = 0; k < 4; ++k) m(k, k) = std::polar(1.0, angle(rng));
        u.push_back(m);
      }
      const ComplexMatrix t = build_T(u);
      const ComplexMatrix sq = t.adjoint() * t - d * ComplexMatrix::Identity(t.rows(), t.rows());
      worst = std::max(worst, sq.cwiseAbs().maxCoeff());
    }
    return Verdict{worst <= 1e-12, "max entry of T*T - dI " + fmt(worst, 3)};
  });

  criterion(6, "Monte-Carlo norms at N=500", [] {
    bool ok = true;
    std::string msg;
    for (const char* d : {"2", "3"}) {
      const auto start = std::chrono::steady_clock::now();
      const Run r = cli({"free-norms", "--N", "500", "--d", d, "--seed", "1"});
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (r.code != kExitOk || r.records.size() != 2) return Verdict{false, "free-norms failed"};
      for (const auto& rec : r.records) {
        const double target = detail(rec, "target");
        ok = ok && std::abs(rec.value - target) <= 0.12 && secs <= 180;
        msg += rec.params.at("quantity").get<std::string>() + "(d=" + d + ") " + fmt(rec.value, 5) + " vs " +
               fmt(target, 5) + "; ";
      }
    }
    const Run a = cli({"arcsine", "--N", "500", "--seed", "1"});
    if (a.code != kExitOk || a.records.empty()) return Verdict{false, "arcsine failed"};
    const ResultRecord& rec = a.records[0];
    const double sum = detail(rec, "sum_norm");
    const double comm = detail(rec, "commutator_norm");
    ok = ok && rec.value <= 0.05 && std::abs(sum - 2) <= 0.1 && std::abs(comm - 2) <= 0.1 && rec.runtime_ms <= 180'000;
    msg += "KS " + fmt(rec.value, 3) + ", ||U+V|| " + fmt(sum, 5) + ", ||[U,V]|| " + fmt(comm, 5);
    return Verdict{ok, msg};
  });

  criterion(7, "free/commuting inequality on 20 trials", [] {
    const Run r = cli({"lehner", "--d", "2", "--N", "300", "--coeff-dim", "2", "--coefficient-trials", "20",
                       "--allowance", "0.05", "--seed", "1"});
    if (r.records.empty()) return Verdict{false, "no record, exit " + std::to_string(r.code)};
    const ResultRecord& rec = r.records[0];
    const int fails = rec.details.at("failures").get<int>();
    return Verdict{r.code == kExitOk && fails == 0,
                   std::to_string(fails) + " failing trials, worst slack " + fmt(rec.value, 4)};
  });

  criterion(8, "Weyl compression on 10 random pairs", [] {
    const Run r = cli({"weyl-verify", "--pairs", "10", "--max-distance", "1", "--cutoff", "10", "--seed", "1",
                       "--max-residual", "1e-3", "--max-commutation", "1e-4"});
    if (r.records.empty()) return Verdict{false, "no record, exit " + std::to_string(r.code)};
    const ResultRecord& rec = r.records[0];
    const double vec = detail(rec, "vector_invariants");
    const double comm = detail(rec, "commutation_defect");
    const bool vec_ok = vec <= 1e-10, res_ok = rec.value <= 1e-3, comm_ok = comm <= 1e-4;
    auto tag = [](bool b) { return b ? " ok" : " FAILS"; };
    return Verdict{vec_ok && res_ok && comm_ok, "vectors " + fmt(vec, 3) + tag(vec_ok) + "; residual " +
                                                   fmt(rec.value, 3) + " (tol 1e-3)" + tag(res_ok) +
                                                   "; commutation " + fmt(comm, 3) + tag(comm_ok)};
  });

  criterion(9, "l1 ball inside W_1", [] {
    const std::vector<std::vector<std::string>> runs{
        {"l1-ball", "--family", "commuting", "--d", "2"},
        {"l1-ball", "--family", "commuting", "--d", "3"},
        {"l1-ball", "--family", "rotation", "--d", "2", "--m", "1", "--n", "2"},
        {"l1-ball", "--family", "rotation", "--d", "2", "--m", "1", "--n", "3"},
        {"l1-ball", "--family", "rotation", "--d", "3", "--m", "3", "--n", "7"},
    };
    bool ok = true;
    std::string msg;
    for (const auto& args : runs) {
      const Run r = cli(args);
      if (r.records.empty()) return Verdict{false, "no record, exit " + std::to_string(r.code)};
      const ResultRecord& rec = r.records[0];
      const double target = detail(rec, "target");
      ok = ok && r.code == kExitOk && rec.value >= target - 1e-3;
      msg += args[2] + (args[2] == "rotation" ? " " + args[6] + "/" + args[8] : "") + " d=" + args[4] + " " +
             fmt(rec.value, 4) + ">=" + fmt(target, 4) + "; ";
    }
    return Verdict{ok, msg};
  });

  criterion(10, "Hoelder extension of grid paths", [] {
    bool ok = true;
    std::string msg = "linear: " + path_checks(linear_oracle(1.7, 2), 11, ok);
    msg += "; faber: " + path_checks(faber_schauder_oracle(3, 0.5, 1.0, 0.4, 12), 12, ok);
    msg += "; unitary: " + path_checks(unitary_path_oracle(2, 3, 2, 0.6, 0.8, 13), 13, ok);
    return Verdict{ok, msg};
  });

  criterion(11, "reruns are bit-identical", [] {
    const std::string t2 = write_theta("t2.theta", "2\n3/7\n");
    const std::string t3 = write_theta("t3.theta", "3\n1/4 1/3\n1/2\n");
    const std::string t3p = write_theta("t3p.theta", "3\n0.9 1.1\n3.0\n");
    const std::vector<std::vector<std::string>> commands{
        {"ctheta", "--m", "3", "--n", "7", "--grid", "0.01"},
        {"ctheta", "--theta-frac", "0.4142135623730951", "--max-denominator", "30", "--grid", "0.01"},
        {"ctheta-general", "--theta-file", t3, "--grid", "0.05", "--lattice", "2", "--rounds", "0"},
        {"c3-bound", "--grid", "0.05", "--threshold", "0"},
        {"constants", "--d-max", "5"},
        {"free-norms", "--N", "60", "--trials", "2", "--seed", "4"},
        {"arcsine", "--N", "60", "--seed", "4"},
        {"lehner", "--N", "40", "--coefficient-trials", "3", "--seed", "4"},
        {"cf0-search", "--N", "30", "--starts", "2", "--steps", "2", "--seed", "4"},
        {"weyl-verify", "--pairs", "3", "--seed", "4"},
        {"vectors", "--theta-file", t2, "--theta-prime-file", t2},
        {"vectors", "--theta-file", t3, "--theta-prime-file", t3p},
        {"mrange-audit", "--pairs", "0/1:1/3", "--resolution", "0.1", "--phase-grid", "0.1"},
        {"l1-ball", "--family", "commuting", "--d", "2"},
        {"extend-path", "--oracle", "unitary", "--t", "0.37", "--eps", "1e-5", "--audit-samples", "100"},
    };
    int mismatches = 0;
    std::string which;
    for (const auto& args : commands) {
      const Run a = cli(args);
      const Run b = cli(args);
      bool same = a.code == b.code && a.records.size() == b.records.size() && !a.records.empty();
      for (std::size_t i = 0; same && i < a.records.size(); ++i) {
        const auto& x = a.records[i];
        const auto& y = b.records[i];
        // NaN-safe bitwise comparison
        same = std::memcmp(&x.value, &y.value, sizeof(double)) == 0 &&
               std::memcmp(&x.error_bound, &y.error_bound, sizeof(double)) == 0;
      }
      if (!same) {
        ++mismatches;
        which += " " + args[0];
      }
    }
    return Verdict{mismatches == 0, std::to_string(commands.size()) + " commands rerun, " +
                                        std::to_string(mismatches) + " differ" + which};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
