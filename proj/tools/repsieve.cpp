// repsieve: residue tables, congruence-sieve certificates and repdigit scans
// for balancing-type recurrences.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "repsieve/modular.hpp"
#include "repsieve/oracle.hpp"
#include "repsieve/parallel.hpp"
#include "repsieve/serialize.hpp"
#include "repsieve/sieve.hpp"
#include "repsieve/tables.hpp"

namespace {

using namespace repsieve;

constexpr int kExitEmpty = 0;
constexpr int kExitError = 1;
constexpr int kExitResidual = 2;

struct SpecOptions {
  std::string name = "balancing";
  std::optional<std::int64_t> p, q, seed0, seed1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--spec", name, "built-in sequence: balancing | lucas_balancing");
    cmd->add_option("--p", p, "inline spec: coefficient p of x_{n+1} = p x_n + q x_{n-1}");
    cmd->add_option("--q", q, "inline spec: coefficient q");
    cmd->add_option("--seed0", seed0, "inline spec: x_0");
    cmd->add_option("--seed1", seed1, "inline spec: x_1");
  }

  RecurrenceSpec resolve() const {
    const bool inline_spec = p || q || seed0 || seed1;
    if (inline_spec) {
      if (!(p && q && seed0 && seed1)) {
        throw std::invalid_argument("inline spec needs all of --p --q --seed0 --seed1");
      }
      if (*q == 0) throw std::invalid_argument("inline spec needs q != 0");
      return {"inline", *p, *q, *seed0, *seed1};
    }
    auto spec = builtin_spec(name);
    if (!spec) throw std::invalid_argument("unknown spec '" + name + "'");
    return *spec;
  }
};

enum class Format { human, tsv, json };

void add_format(CLI::App* cmd, Format& format) {
  cmd->add_option("--format", format, "output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"human", Format::human}, {"tsv", Format::tsv}, {"json", Format::json}},
          CLI::ignore_case));
}

std::string join(const std::vector<std::uint64_t>& v, const char* sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
  return os.str();
}

std::string describe_classes(const std::vector<std::uint64_t>& classes, std::uint64_t modulus) {
  std::ostringstream os;
  if (classes.size() > 24) {
    os << classes.size() << " classes mod " << modulus;
  } else {
    os << "{" << join(classes, ", ") << "} mod " << modulus;
  }
  return os.str();
}

int run_tables(int which, Format format) {
  std::vector<int> ids = which == 0 ? std::vector<int>{1, 2, 3, 4} : std::vector<int>{which};
  if (format == Format::json) {
    json out = json::array();
    for (int id : ids) {
      const auto t = residue_table(id);
      json rows = json::array();
      for (const auto& r : t.rows) {
        json row{{"row", r.row}, {"modulus", r.modulus}, {"values", r.residues}, {"period", r.period}};
        if (id == 4) row["product_residues"] = r.product_residues;
        rows.push_back(std::move(row));
      }
      out.push_back(json{{"table", id}, {"caption", t.caption}, {"rows", std::move(rows)}});
    }
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  for (int id : ids) {
    const auto t = residue_table(id);
    std::cout << (format == Format::tsv ? render_tsv(t) : render_human(t));
  }
  return 0;
}

int run_cycle(const SpecOptions& so, Residue modulus, std::uint64_t k, Format format, bool period_only) {
  const auto spec = so.resolve();
  const auto cycle = product_residue_cycle(spec, k, modulus);
  if (format == Format::json) {
    std::cout << json(cycle).dump(2) << '\n';
  } else if (period_only) {
    std::cout << cycle.period() << '\n';
  } else {
    std::cout << join(cycle.values) << '\n';
  }
  return 0;
}

int run_repunit(Residue base, Residue modulus, Format format) {
  const auto cycle = repunit_cycle(base, modulus);
  if (format == Format::json) {
    std::cout << json(cycle).dump(2) << '\n';
  } else if (format == Format::tsv) {
    std::cout << "tail\tcycle\tperiod\n" << join(cycle.tail) << '\t' << join(cycle.cycle) << '\t'
              << cycle.period() << '\n';
  } else {
    std::cout << "tail [" << join(cycle.tail, ", ") << "]  cycle [" << join(cycle.cycle, ", ")
              << "]  period " << cycle.period() << '\n';
  }
  return 0;
}

struct ScanOptions {
  SpecOptions spec;
  std::uint64_t k = 0;
  std::optional<std::uint64_t> all_k;
  std::vector<std::uint32_t> digits;
  std::uint32_t base = 10;
  std::uint64_t min_m = 1, min_n = 1, max_n = 300, max_digits = 150;
  Format format = Format::human;
};

int run_scan(const ScanOptions& o) {
  TargetForm target;
  target.spec = o.spec.resolve();
  target.window = o.all_k ? Window::all_from(*o.all_k) : Window::fixed(o.k);
  target.base = o.base;
  target.min_m = o.min_m;
  target.min_n = o.min_n;
  if (o.digits.empty()) {
    for (std::uint32_t a = 1; a < o.base; ++a) target.digits.push_back(a);
  } else {
    target.digits = o.digits;
    std::sort(target.digits.begin(), target.digits.end());
  }
  const auto result = scan(target, o.max_n, o.max_digits, thread_count());
  if (o.format == Format::json) {
    std::cout << json(result).dump(2) << '\n';
  } else if (o.format == Format::tsv) {
    std::cout << to_tsv(result);
  } else {
    std::cout << result.hits.size() << " hit(s) for " << target.spec.name << " " << target.window.describe()
              << ", n <= " << o.max_n << '\n';
    for (const auto& h : result.hits) {
      std::cout << "  n=" << h.n << " k=" << h.k << "  " << h.value.get_str() << "  (m=" << h.m
                << ", a=" << h.a << ")\n";
    }
    for (const auto& h : result.out_of_range) {
      std::cout << "  out of range: n=" << h.n << " k=" << h.k << " m=" << h.m << " a=" << h.a << '\n';
    }
  }
  return 0;
}

struct ProveCliOptions {
  int eq = 0;
  std::vector<std::uint32_t> digits;
  std::optional<std::uint64_t> min_m, min_n;
  std::vector<std::uint64_t> pool;
  std::optional<std::uint64_t> pool_max;
  std::uint64_t n_lattice = 0, m_lattice = 0;
  std::string strategy = "paper_order";
  std::uint64_t cap = kDefaultLatticeCap;
  std::uint64_t max_n = 300, max_m = 150;
  bool cascades = false;
  std::string out;
  std::uint64_t project_n = 0, project_m = 0;
};

void print_summary(std::ostream& os, const Certificate& cert, const ProveCliOptions& o) {
  os << "target: " << cert.target.spec.name << " " << cert.target.window.describe() << ", digits {"
     << join(std::vector<std::uint64_t>(cert.target.digits.begin(), cert.target.digits.end()), ", ")
     << "}, m >= " << cert.target.min_m << '\n';
  os << "strategy " << to_string(cert.strategy) << ", moduli used: " << join(used_moduli(cert), ", ") << '\n';
  for (const auto& b : cert.branches) {
    const auto& st = b.final_state;
    os << "  a=" << b.digit << " " << b.window.describe() << ": " << b.steps.size() << " step(s), "
       << (st.empty() ? "empty" : "residual") << "  (L=" << st.n_modulus << ", M=" << st.m_modulus
       << ", m_tail_checked=" << st.m_tail_checked << ")\n";
    if (!st.empty()) {
      os << "    n in " << describe_classes(st.n_classes(st.n_modulus), st.n_modulus) << '\n';
      os << "    m in " << describe_classes(st.m_classes(st.m_modulus), st.m_modulus) << '\n';
      if (o.project_n != 0 && st.n_modulus % o.project_n == 0) {
        os << "    n projected: " << describe_classes(st.n_classes(o.project_n), o.project_n) << '\n';
      }
      if (o.project_m != 0 && st.m_modulus % o.project_m == 0) {
        os << "    m projected: " << describe_classes(st.m_classes(o.project_m), o.project_m) << '\n';
      }
    }
  }
  os << "exceptions:";
  if (cert.exceptions.empty()) os << " none";
  for (const auto& e : cert.exceptions) {
    os << " (" << e.n << "," << e.m << "," << e.a << ")";
    if (e.k != 0) os << "[k=" << e.k << "]";
  }
  os << "\nconclusion: " << (cert.conclusion == Conclusion::empty ? "empty" : "residual") << '\n';
}

int run_prove(const ProveCliOptions& o) {
  TargetForm target = equation_target(o.eq);
  if (!o.digits.empty()) {
    target.digits = o.digits;
    std::sort(target.digits.begin(), target.digits.end());
    target.digits.erase(std::unique(target.digits.begin(), target.digits.end()), target.digits.end());
  }
  if (o.min_m) target.min_m = *o.min_m;
  if (o.min_n) target.min_n = *o.min_n;

  ProveOptions options;
  options.pool = o.pool;
  if (o.pool_max) {
    const auto range = modulus_range(target, *o.pool_max);
    options.pool.insert(options.pool.end(), range.begin(), range.end());
  }
  if (options.pool.empty()) options.pool = equation_pool(o.eq);
  if (o.n_lattice != 0 || o.m_lattice != 0) {
    options.pool = filter_pool_by_lattice(target, options.pool, o.n_lattice, o.m_lattice);
  }
  options.strategy = strategy_from_string(o.strategy);
  options.lattice_cap = o.cap;
  options.small_case_bound = {o.max_n, o.max_m};
  options.cascades = o.cascades;
  options.threads = thread_count();

  const Certificate cert = prove(target, options);
  const std::string text = dump_certificate(cert);
  if (o.out.empty()) {
    std::cout << text;
    print_summary(std::cerr, cert, o);
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + o.out);
    file << text;
    print_summary(std::cout, cert, o);
  }
  return cert.conclusion == Conclusion::empty ? kExitEmpty : kExitResidual;
}

int run_verify(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "cannot read " << path << '\n';
    return kExitError;
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  Certificate cert;
  try {
    cert = parse_certificate(buffer.str());
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitError;
  }
  const auto report = verify_certificate(cert);
  if (report.ok) {
    std::cout << "certificate OK: conclusion "
              << (cert.conclusion == Conclusion::empty ? "empty" : "residual") << ", "
              << cert.branches.size() << " branch(es), " << cert.exceptions.size() << " exception(s)\n";
    return 0;
  }
  std::cout << "certificate REJECTED";
  if (report.branch) std::cout << " at branch " << *report.branch;
  if (report.step) std::cout << ", step " << *report.step;
  std::cout << ": " << report.message << '\n';
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"repsieve: residue cycles, repdigit scans and congruence-sieve certificates"};
  app.require_subcommand(1);

  int which = 0;
  Format tables_format = Format::human;
  auto* tables = app.add_subcommand("tables", "reproduce the residue tables");
  tables->add_option("--which", which, "table number 1-4 (default: all)")->check(CLI::Range(0, 4));
  add_format(tables, tables_format);

  SpecOptions period_spec;
  Residue period_mod = 0;
  std::uint64_t period_k = 0;
  Format period_format = Format::human;
  auto* period = app.add_subcommand("period", "minimal period of a residue cycle");
  period_spec.attach(period);
  period->add_option("--mod", period_mod, "modulus")->required();
  period->add_option("--k", period_k, "window size (product of k+1 consecutive terms)");
  add_format(period, period_format);

  SpecOptions residues_spec;
  Residue residues_mod = 0;
  std::uint64_t residues_k = 0;
  Format residues_format = Format::human;
  auto* residues = app.add_subcommand("residues", "one period of residues");
  residues_spec.attach(residues);
  residues->add_option("--mod", residues_mod, "modulus")->required();
  residues->add_option("--k", residues_k, "window size (product of k+1 consecutive terms)");
  add_format(residues, residues_format);

  Residue rep_base = 10, rep_mod = 0;
  Format rep_format = Format::human;
  auto* repcycle = app.add_subcommand("repunit-cycle", "tail and cycle of repunits mod q");
  repcycle->add_option("--base", rep_base, "base g");
  repcycle->add_option("--mod", rep_mod, "modulus")->required();
  add_format(repcycle, rep_format);

  ScanOptions scan_opts;
  auto* scan_cmd = app.add_subcommand("scan", "exhaustive repdigit search");
  scan_opts.spec.attach(scan_cmd);
  scan_cmd->add_option("--k", scan_opts.k, "fixed window size");
  scan_cmd->add_option("--all-k", scan_opts.all_k, "every window size >= this value");
  scan_cmd->add_option("--digits", scan_opts.digits, "digits to accept (default all)")->delimiter(',');
  scan_cmd->add_option("--base", scan_opts.base, "base g");
  scan_cmd->add_option("--min-m", scan_opts.min_m, "smallest repdigit length");
  scan_cmd->add_option("--min-n", scan_opts.min_n, "smallest start index");
  scan_cmd->add_option("--max-n", scan_opts.max_n, "largest start index");
  scan_cmd->add_option("--max-digits", scan_opts.max_digits, "longest repdigit reported as a hit");
  add_format(scan_cmd, scan_opts.format);

  ProveCliOptions prove_opts;
  auto* prove_cmd = app.add_subcommand("prove", "run the congruence sieve and write a certificate");
  prove_cmd->add_option("--eq", prove_opts.eq, "equation 1-4")->required()->check(CLI::Range(1, 4));
  prove_cmd->add_option("--digit", prove_opts.digits, "digit(s) a to treat")->delimiter(',');
  prove_cmd->add_option("--min-m", prove_opts.min_m, "override the smallest repdigit length");
  prove_cmd->add_option("--min-n", prove_opts.min_n, "override the smallest start index");
  prove_cmd->add_option("--pool", prove_opts.pool, "moduli, comma separated, applied in order")->delimiter(',');
  prove_cmd->add_option("--pool-max", prove_opts.pool_max, "add every usable modulus 2..N to the pool");
  prove_cmd->add_option("--n-lattice", prove_opts.n_lattice, "keep moduli whose sequence period divides this");
  prove_cmd->add_option("--m-lattice", prove_opts.m_lattice, "keep moduli whose repunit period divides this");
  prove_cmd->add_option("--strategy", prove_opts.strategy, "paper_order | greedy_smallest_survivor");
  prove_cmd->add_option("--cap", prove_opts.cap, "lattice cap in (n, m) cells");
  prove_cmd->add_option("--max-n", prove_opts.max_n, "small-case scan bound on n");
  prove_cmd->add_option("--max-m", prove_opts.max_m, "small-case scan bound on m");
  prove_cmd->add_flag("--cascade", prove_opts.cascades, "try divisibility cascades (balancing, k = 0)");
  prove_cmd->add_option("--out", prove_opts.out, "certificate path (default: stdout)");
  prove_cmd->add_option("--project-n", prove_opts.project_n, "report residual n classes modulo this");
  prove_cmd->add_option("--project-m", prove_opts.project_m, "report residual m classes modulo this");

  std::string verify_path;
  auto* verify_cmd = app.add_subcommand("verify", "replay and check a certificate");
  verify_cmd->add_option("certificate", verify_path, "certificate JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*tables) return run_tables(which, tables_format);
    if (*period) return run_cycle(period_spec, period_mod, period_k, period_format, true);
    if (*residues) return run_cycle(residues_spec, residues_mod, residues_k, residues_format, false);
    if (*repcycle) return run_repunit(rep_base, rep_mod, rep_format);
    if (*scan_cmd) return run_scan(scan_opts);
    if (*prove_cmd) return run_prove(prove_opts);
    if (*verify_cmd) return run_verify(verify_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
