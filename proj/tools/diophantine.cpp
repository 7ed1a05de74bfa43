// Batch front end: construct a trace, audit it, tabulate the theorem bands.
//
// Exit codes: 0 ok, 1 usage or I/O, 2 construction failure, 3 audit failure.

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "dioph/errors.hpp"
#include "dioph/serialize.hpp"

namespace {

using namespace dioph;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kConstruction = 2;
constexpr int kAudit = 3;

// Accepts plain integers and the shorthand "1e8".
Integer parse_budget(const std::string& text) {
  auto e = text.find_first_of("eE");
  if (e == std::string::npos) return parse_integer(text);
  Integer mant = parse_integer(text.substr(0, e));
  long exp = std::stol(text.substr(e + 1));
  if (exp < 0 || exp > 30) throw ParseError("budget exponent out of range");
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp));
  return mant * p;
}

struct ConstructArgs {
  std::string psi;
  std::string psi_file;
  long steps = 10;
  std::string mode = "norm";
  std::string seed = "0";
  std::string selection = "search";
  std::string out;
  bool verbose = false;
};

int cmd_construct(const ConstructArgs& a) {
  if (a.steps < 2) {
    std::cerr << "error: K must be >= 2\n";
    return kUsage;
  }
  PsiSpec spec;
  Mode mode;
  Selection sel;
  try {
    if (!a.psi_file.empty())
      spec = psi_spec_from_json(Json::parse(read_file(a.psi_file)));
    else if (!a.psi.empty())
      spec = parse_psi_inline(a.psi);
    else
      throw ParseError("one of --psi or --psi-file is required");
    mode = parse_mode(a.mode);
    sel = parse_selection(a.selection);
    BranchTape validate(a.seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  ConstructionTrace trace;
  try {
    RunOptions opt;
    opt.selection = sel;
    trace = run_construction(spec, a.steps, mode, a.seed, opt);
  } catch (const InadmissibleSpec& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return kConstruction;
  } catch (const InadmissiblePsi& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return kConstruction;
  } catch (const StepVerificationFailed& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return kConstruction;
  } catch (const Error& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return kConstruction;
  }

  if (a.verbose) {
    for (const auto& s : trace.steps)
      std::cerr << "k=" << s.k << " m_k=" << to_string(s.m_k) << " m_k1=" << to_string(s.m_k1)
                << " |m_k1|^2/|m_k|^2=" << to_decimal(QuadReal(make_rational(s.m_k1.sq_norm(), s.m_k.sq_norm())), 6)
                << (s.offset || s.lift ? " (offset " + std::to_string(s.offset) + ", lift " + std::to_string(s.lift) + ")" : "")
                << "\n";
  }
  std::string text = dump_trace(trace);
  try {
    if (a.out.empty() || a.out == "-")
      std::cout << text;
    else
      write_file(a.out, text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

struct VerifyArgs {
  std::string trace;
  std::string budget = "100000000";
  std::string out;
  int threads = 0;
  std::string kernel = "auto";
  bool table = true;
};

int cmd_verify(const VerifyArgs& a) {
  ConstructionTrace trace;
  Integer budget;
  AuditOptions opt;
  try {
    trace = parse_trace(read_file(a.trace));
    budget = parse_budget(a.budget);
    if (budget < 1) throw ParseError("budget must be >= 1");
    opt.enumeration.threads = a.threads;
    if (a.kernel == "scalar")
      opt.enumeration.kernel = Kernel::Scalar;
    else if (a.kernel == "avx2")
      opt.enumeration.kernel = Kernel::Avx2;
    else if (a.kernel != "auto")
      throw ParseError("unknown kernel '" + a.kernel + "'");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  AuditReport rep;
  try {
    rep = audit_trace(trace, budget, opt);
  } catch (const Error& e) {
    std::cerr << "audit failed: " << e.what() << "\n";
    return kAudit;
  }
  try {
    if (!a.out.empty()) write_file(a.out, to_json(rep).dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (a.table) std::cout << audit_table(rep);
  if (auto f = rep.first_failure()) {
    std::cerr << "audit failed: " << *f << "\n";
    return kAudit;
  }
  return kOk;
}

struct ReportArgs {
  std::string trace;
  std::string audit;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  try {
    ConstructionTrace trace = parse_trace(read_file(a.trace));
    Json audit = Json::parse(read_file(a.audit));
    if (audit.value("K", -1L) != static_cast<long>(trace.steps.size()))
      throw ParseError("audit does not belong to this trace");
    std::string csv = report_csv(audit);
    if (a.out.empty() || a.out == "-")
      std::cout << csv;
    else
      write_file(a.out, csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructs linear forms with prescribed best-approximation bounds and audits them."};
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "run the induction and write a trace");
  construct->add_option("--psi", ca.psi, "inline psi: constant:C | power:C:E | log:C:S");
  construct->add_option("--psi-file", ca.psi_file, "psi spec as JSON");
  construct->add_option("--steps,-K", ca.steps, "number of states K (>= 2)");
  construct->add_option("--mode", ca.mode, "norm (psi(|m_k|)) or index (psi(k))");
  construct->add_option("--seed", ca.seed, "branch bits, e.g. 0110");
  construct->add_option("--selection", ca.selection, "search (default) or strict");
  construct->add_option("-o,--output", ca.out, "trace path (default stdout)");
  construct->add_flag("-v,--verbose", ca.verbose, "print each step to stderr");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "audit a trace");
  verify->add_option("trace,--trace", va.trace, "trace JSON")->required();
  verify->add_option("--budget", va.budget, "largest |m|^2 the oracle may enumerate");
  verify->add_option("-o,--output", va.out, "audit JSON path");
  verify->add_option("--threads", va.threads, "enumeration workers (DIOPHANTINE_THREADS overrides)");
  verify->add_option("--kernel", va.kernel, "screening kernel: auto, scalar, avx2");
  verify->add_flag("!--no-table", va.table, "suppress the summary table");

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "write the theorem-band CSV");
  report->add_option("--trace", ra.trace, "trace JSON")->required();
  report->add_option("--audit", ra.audit, "audit JSON")->required();
  report->add_option("-o,--output", ra.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (*construct) return cmd_construct(ca);
  if (*verify) return cmd_verify(va);
  return cmd_report(ra);
}
