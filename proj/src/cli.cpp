#include "arbor/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "arbor/io.hpp"

namespace arbor {

namespace {

std::string decimal(const mpq_class& q, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << q.get_d();
  return os.str();
}

std::string exact_and_decimal(const mpq_class& q) { return rational_string(q) + " (" + decimal(q) + ")"; }

void check_format(const std::string& f) {
  if (f != "table" && f != "json") throw InputError("--format must be table or json");
}

std::string structure(const H1Result& r) {
  if (r.trivial()) return "trivial";
  std::string s;
  for (std::size_t i = 0; i < r.factors.size(); ++i) s += (i ? " × Z/" : "Z/") + std::to_string(r.factors[i]);
  return s;
}

std::string h1_line(const H1Result& r) {
  return structure(r) + ", exponent " + std::to_string(r.exponent) + ", Sah bound " + std::to_string(r.sah_bound);
}

// ---- bound ----------------------------------------------------------------

struct BoundArgs {
  std::string group;
  int d = 0;
  std::string format = "table";
};

int cmd_bound(const BoundArgs& a, std::ostream& out) {
  check_format(a.format);
  const BoundReport r = analyze(load_group_file(a.group), a.d);
  if (a.format == "json") {
    out << json(r).dump(2) << "\n";
    return kExitOk;
  }
  auto row = [&](const char* k, const std::string& v) { out << std::left << std::setw(15) << k << v << "\n"; };
  row("ell", std::to_string(r.params.ell));
  row("d", std::to_string(r.params.d));
  row("r", std::to_string(r.params.r));
  row("s", std::to_string(r.params.s));
  row("n_ell", std::to_string(r.params.n_ell));
  row("index", std::to_string(r.params.index));
  row("bound", r.bound.get_str());
  std::string cert = "level " + std::to_string(r.level);
  if (r.r_saturated) cert += ", r saturated";
  if (r.s_saturated) cert += ", s saturated";
  if (!r.r_saturated && !r.s_saturated) cert += ", exact";
  row("certified at", cert);
  return kExitOk;
}

// ---- density --------------------------------------------------------------

struct DensityArgs {
  std::uint64_t ell = 0;
  int level = 1;
  std::string image;
  std::string format = "table";
  unsigned threads = 1;
};

int cmd_density(const DensityArgs& a, std::ostream& out) {
  check_format(a.format);
  FixFractionReport r;
  if (a.image.empty()) {
    if (a.ell == 0) throw InputError("--ell is required without --image");
    if (!is_prime(a.ell)) throw InputError("ell = " + std::to_string(a.ell) + " is not prime");
    r = density_report_full(a.ell, a.level, a.threads);
  } else {
    const SubgroupSpec spec = load_group_file(a.image);
    if (a.ell != 0 && a.ell != spec.ctx().ell())
      throw InputError("--ell " + std::to_string(a.ell) + " disagrees with the image file");
    r = density_report(close(spec), a.level);
  }
  if (a.format == "json") {
    out << json(r).dump(2) << "\n";
    return kExitOk;
  }
  out << "ell = " << r.ell << ", image: " << r.image << "\n";
  out << std::left << std::setw(4) << "n" << std::setw(24) << "f_n" << "decimal\n";
  for (std::size_t i = 0; i < r.levels.size(); ++i)
    out << std::setw(4) << r.levels[i] << std::setw(24) << rational_string(r.fractions[i]) << decimal(r.fractions[i])
        << "\n";
  out << "nonincreasing: " << (r.nonincreasing ? "yes" : "no") << "\n";
  if (r.closed_form) {
    out << "surjective limit: " << exact_and_decimal(*r.closed_form) << "\n";
    out << "bounded below by limit: " << (r.above_closed_form ? "yes" : "no") << "\n";
  }
  return kExitOk;
}

// ---- h1 -------------------------------------------------------------------

struct H1Args {
  std::string group;
  int module_level = 1;
  std::string tower;
  std::string format = "table";
};

std::pair<int, int> parse_range(const std::string& s) {
  int lo = 0, hi = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d..%d%c", &lo, &hi, &tail) != 2)
    throw InputError("--tower expects M1..M2, got \"" + s + "\"");
  return {lo, hi};
}

int cmd_h1(const H1Args& a, std::ostream& out) {
  check_format(a.format);
  const SubgroupSpec spec = load_group_file(a.group);
  if (!a.tower.empty()) {
    auto [lo, hi] = parse_range(a.tower);
    const H1Tower t = h1_tower(spec, a.module_level, lo, hi);
    if (a.format == "json") {
      out << json(t).dump(2) << "\n";
      return kExitOk;
    }
    for (std::size_t i = 0; i < t.levels.size(); ++i)
      out << "level " << t.levels[i] << " (|G| = " << t.results[i].group_order << "): " << h1_line(t.results[i]) << "\n";
    out << "constant: " << (t.constant ? "yes" : "no") << "\n";
    return kExitOk;
  }
  const H1Result r = h1(close(spec), a.module_level);
  if (a.format == "json") {
    out << json(r).dump(2) << "\n";
    return kExitOk;
  }
  out << "H^1(G, (Z/" << r.ell << "^" << r.module_level << ")^2), |G| = " << r.group_order << "\n";
  out << h1_line(r) << "\n";
  return kExitOk;
}

// ---- scan -----------------------------------------------------------------

struct ScanArgs {
  std::string curve;
  std::uint64_t ell = 2;
  std::uint64_t limit = 0;
  unsigned threads = 1;
  std::string csv;
  std::string format = "table";
};

int cmd_scan(const ScanArgs& a, std::ostream& out) {
  check_format(a.format);
  const CurveInput in = load_curve_file(a.curve);
  ecq::ScanOptions opts;
  opts.threads = a.threads;
  opts.keep_records = !a.csv.empty();
  const ecq::ScanResult r = ecq::density_scan(in.curve, in.point, a.ell, a.limit, opts);
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw InputError("cannot write " + a.csv);
    f << "prime,good,coprime_order\n";
    for (const auto& rec : r.records) f << rec.prime << "," << rec.good << "," << rec.coprime_order << "\n";
  }
  const mpq_class target = surjective_density(a.ell);
  if (a.format == "json") {
    json j = r;
    j["surjective_density"] = rational_json(target);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "curve " << ecq::to_string(in.curve) << ", alpha = " << ecq::to_string(in.point) << ", ell = " << r.ell << "\n";
  out << "primes <= " << r.limit << ": good " << r.good << ", skipped " << r.skipped << ", order prime to " << r.ell
      << ": " << r.coprime << "\n";
  out << "fraction " << exact_and_decimal(r.fraction) << "\n";
  out << "target (surjective image) " << exact_and_decimal(target) << "\n";
  return kExitOk;
}

// ---- divide ---------------------------------------------------------------

struct DivideArgs {
  std::string curve;
  std::uint64_t ell = 2;
  int depth = ecq::kMaxDivisionDepth;
  std::string format = "table";
};

std::string point_list(const std::vector<ecq::PointQ>& ps) {
  if (ps.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? ", " : "") + ecq::to_string(ps[i]);
  return s;
}

int cmd_divide(const DivideArgs& a, std::ostream& out) {
  check_format(a.format);
  if (a.depth < 1) throw InputError("--depth must be positive");
  const CurveInput in = load_curve_file(a.curve);
  const ecq::DivisionReport r = ecq::divisibility_report(in.curve, in.point, a.ell, a.depth);
  if (a.format == "json") {
    out << json(r).dump(2) << "\n";
    return kExitOk;
  }
  const std::string l = std::to_string(a.ell);
  out << "curve " << ecq::to_string(in.curve) << ", alpha = " << ecq::to_string(in.point) << "\n";
  out << "rational " << l << "-power torsion: " << point_list(r.rational_torsion) << "\n";
  out << "[" << l << "]^-1(alpha): " << point_list(ecq::divide_point(in.curve, in.point, a.ell)) << "\n";
  if (r.d > 0) {
    out << "T = " << ecq::to_string(r.torsion) << "\n";
    out << "  alpha - T = " << ecq::to_string(r.chain.front()) << "\n";
    for (std::size_t i = 1; i < r.chain.size(); ++i)
      out << std::string(2 * i + 2, ' ') << "depth " << i << ": " << ecq::to_string(r.chain[i]) << "\n";
    out << "d = " << r.d << (r.depth_capped ? " (depth cap reached)" : "") << "\n";
  } else {
    out << "d = 0, strongly " << l << "-indivisible\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-level arboreal Galois image toolkit", "arbor"};
  app.require_subcommand(1);

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "invariants r, s, n_ell and the index bound for a group file");
  bound->add_option("--group", ba.group, "group file (JSON)")->required();
  bound->add_option("--d", ba.d, "divisibility depth d")->required();
  bound->add_option("--format", ba.format, "table or json");

  DensityArgs da;
  auto* density = app.add_subcommand("density", "finite-level fixed-point fractions f_n");
  density->add_option("--ell", da.ell, "prime ell (full image)");
  density->add_option("--level", da.level, "largest level n")->required();
  density->add_option("--image", da.image, "affine image group file");
  density->add_option("--format", da.format, "table or json");
  density->add_option("--threads", da.threads, "worker threads");

  H1Args ha;
  auto* h1c = app.add_subcommand("h1", "H^1(G, (Z/l^n)^2)");
  h1c->add_option("--group", ha.group, "group file (JSON)")->required();
  h1c->add_option("--module-level", ha.module_level, "module level n")->required();
  h1c->add_option("--tower", ha.tower, "group levels M1..M2 (preimages of the file's group)");
  h1c->add_option("--format", ha.format, "table or json");

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "density of primes where alpha has order prime to ell");
  scan->add_option("--curve", sa.curve, "curve file (JSON)")->required();
  scan->add_option("--ell", sa.ell, "prime ell")->required();
  scan->add_option("--limit", sa.limit, "largest prime scanned")->required();
  scan->add_option("--threads", sa.threads, "worker threads");
  scan->add_option("--csv", sa.csv, "write per-prime outcomes to this file");
  scan->add_option("--format", sa.format, "table or json");

  DivideArgs va;
  auto* divide = app.add_subcommand("divide", "ell-division of alpha over Q and the depth d");
  divide->add_option("--curve", va.curve, "curve file (JSON)")->required();
  divide->add_option("--ell", va.ell, "2 or 3")->required();
  divide->add_option("--depth", va.depth, "maximum division depth");
  divide->add_option("--format", va.format, "table or json");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (bound->parsed()) return cmd_bound(ba, out);
    if (density->parsed()) return cmd_density(da, out);
    if (h1c->parsed()) return cmd_h1(ha, out);
    if (scan->parsed()) return cmd_scan(sa, out);
    if (divide->parsed()) return cmd_divide(va, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const EmptyResultError& e) {
    err << "error: " << e.what() << "\n";
    return kExitEmpty;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace arbor
