#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dcat/dsl.hpp"

using namespace dcat;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::invalid_argument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out_path, const Document& d) {
  std::string text = print_document(d);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    require(out.good(), Errc::invalid_argument, "cannot write '" + out_path + "'");
    out << text;
  }
}

struct Options {
  std::string file;
  std::vector<std::string> entries;
  std::string out;
  int bound = 3;
  long long budget = 1'000'000;
  std::uint64_t seed = 0;
};

int run_roundtrip(const Options& opt) {
  Document d = parse_document(read_file(opt.file));
  write_output(opt.out, d);
  return kExitPass;
}

int run_compose(const Options& opt) {
  Document d = parse_document(read_file(opt.file));
  SetSpan m = doc_span(d, opt.entries.at(0));
  SetSpan n = doc_span(d, opt.entries.at(1));
  SetSpan mn = span_compose(m, n);
  Document out;
  put_span(out, "result", mn);
  write_output(opt.out, out);
  std::cerr << "composite apex size " << mn.apex.size() << "\n";
  return kExitPass;
}

int run_product(const Options& opt, bool coproduct) {
  Document d = parse_document(read_file(opt.file));
  FamProarrow fam = doc_family_proarrow(d, opt.entries.at(0));
  Document out;
  if (coproduct) {
    SpanCoproducts ch;
    ProCoproduct c = ch.sum_pro(fam);
    put_span(out, "result", SpanDouble::pro_of(c.summit));
    std::cerr << "coproduct summit apex size "
              << SpanDouble::pro_of(c.summit).apex.size() << ", "
              << c.coprojections.size() << " coprojections\n";
  } else {
    SpanProducts ch;
    ProProduct p = ch.product_pro(fam);
    put_span(out, "result", SpanDouble::pro_of(p.base));
    std::cerr << "product apex size " << SpanDouble::pro_of(p.base).apex.size()
              << ", " << p.projections.size() << " projections\n";
  }
  write_output(opt.out, out);
  return kExitPass;
}

int run_restrict(const Options& opt) {
  Document d = parse_document(read_file(opt.file));
  SetSpan n = doc_span(d, opt.entries.at(0));
  FinFunction f = doc_function(d, opt.entries.at(1));
  FinFunction g = doc_function(d, opt.entries.at(2));
  SpanRestriction r = restrict_span(n, f, g);
  Document out;
  put_span(out, "result", r.restricted);
  write_output(opt.out, out);
  std::cerr << "restriction apex size " << r.restricted.apex.size() << "\n";
  return kExitPass;
}

int run_diagonal(const Options& opt) {
  Document d = parse_document(read_file(opt.file));
  FinSet x = doc_finset(d, opt.entries.at(0));
  SpanProducts ch;
  DiagonalProarrow diag = diagonal_proarrow(ch, SpanDouble::ob(x));
  Document out;
  put_span(out, "result", SpanDouble::pro_of(diag.product.base));
  ReportEntry rep;
  bool ok = diagonal_equations_hold(ch, diag) &&
            companion_equations_hold(span_double(), diag.pair);
  rep.verdict = ok ? "pass" : "fail";
  rep.cases = 1;
  if (!ok) rep.failures.push_back("diagonal defining equations");
  put_report(out, "report", rep);
  write_output(opt.out, out);
  return ok ? kExitPass : kExitCheckFailed;
}

int run_check_universal(const Options& opt) {
  Document d = parse_document(read_file(opt.file));
  FamProarrow fam = doc_family_proarrow(d, opt.entries.at(0));
  CheckOptions copt{opt.bound, opt.budget};
  SpanProducts pch;
  SpanCoproducts cch;
  UniversalCheckReport pr =
      check_universal_product(span_double(), pch.product_pro(fam), copt);
  UniversalCheckReport cr =
      check_universal_coproduct(span_double(), cch.sum_pro(fam), copt);
  ReportEntry rep;
  rep.verdict = pr.ok() && cr.ok() ? "pass" : "fail";
  rep.cases = pr.cases_tried + cr.cases_tried;
  for (const auto& f : pr.failures) rep.failures.push_back("product: " + f);
  for (const auto& f : cr.failures) rep.failures.push_back("coproduct: " + f);
  std::sort(rep.failures.begin(), rep.failures.end());
  Document out;
  put_report(out, "report", rep);
  write_output(opt.out, out);
  std::cerr << "universal checks: " << rep.verdict << " over " << rep.cases
            << " test data" << (pr.partial || cr.partial ? " (budget reached)" : "")
            << "\n";
  return rep.verdict == "pass" ? kExitPass : kExitCheckFailed;
}

int run_check_iso_strong(const Options& opt) {
  Document d = parse_document(read_file(opt.file));
  FamProarrow m = doc_family_proarrow(d, opt.entries.at(0));
  FamProarrow n = doc_family_proarrow(d, opt.entries.at(1));
  SpanProducts ch;
  IsoStrongVerdict v = check_iso_strong(ch, m, n);
  const SpanCell& cell = SpanDouble::cell_of(v.comparison.cell);
  ReportEntry rep;
  rep.verdict = v.comparison.is_iso ? "pass" : "fail";
  rep.cases = 1;
  std::ostringstream info;
  info << "pi-comparison source apex " << cell.top.apex.size() << ", target apex "
       << cell.bottom.apex.size() << ", adjacent legs "
       << (v.adjacent_legs_bijective ? "bijective" : "not bijective");
  if (!v.comparison.is_iso) rep.failures.push_back("not-iso: " + info.str());
  Document out;
  put_report(out, "report", rep);
  write_output(opt.out, out);
  std::cerr << info.str() << "\n";
  return v.comparison.is_iso ? kExitPass : kExitCheckFailed;
}

int run_check_model(const Options& opt) {
  Document d = parse_document(read_file(opt.file));
  ModelData m = doc_model(d, opt.entries.at(0));
  TheoryCheckReport rep = check_model(m);
  Document out;
  put_report(out, "report", report_from_theory(rep));
  write_output(opt.out, out);
  std::cerr << "model check: " << (rep.pass() ? "pass" : "fail") << " ("
            << rep.checks << " checks";
  if (!rep.pass()) std::cerr << ", first violation " << rep.violations[0].axiom;
  std::cerr << ")\n";
  return rep.pass() ? kExitPass : kExitCheckFailed;
}

int run_check_transformation(const Options& opt) {
  Document d = parse_document(read_file(opt.file));
  TransformationData t = doc_transformation(d, opt.entries.at(0));
  TheoryCheckReport rep = check_transformation(t);
  Document out;
  put_report(out, "report", report_from_theory(rep));
  write_output(opt.out, out);
  std::cerr << "transformation check: " << (rep.pass() ? "pass" : "fail") << "\n";
  return rep.pass() ? kExitPass : kExitCheckFailed;
}

int run_fam_iso_span(const Options& opt) {
  FamSpanDictionaryReport rep = check_fam_terminal_iso_span(opt.bound);
  ReportEntry re;
  re.verdict = rep.ok() ? "pass" : "fail";
  re.cases = rep.objects + rep.arrows + rep.proarrows + rep.cells +
             rep.composition_checks;
  re.failures = rep.failures;
  std::sort(re.failures.begin(), re.failures.end());
  Document out;
  put_report(out, "report", re);
  write_output(opt.out, out);
  std::cerr << "dictionary check at bound " << opt.bound << ": " << re.verdict
            << " (" << rep.objects << " objects, " << rep.arrows << " arrows, "
            << rep.proarrows << " proarrows, " << rep.cells << " cells)\n";
  return rep.ok() ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computational kernel for double categories with (co)products"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd, int entry_count, bool needs_file = true) {
    if (needs_file) cmd->add_option("file", opt.file, "input document")->required();
    if (entry_count > 0)
      cmd->add_option("entries", opt.entries, "entry names")
          ->expected(entry_count)
          ->required();
    cmd->add_option("--bound", opt.bound, "test carrier bound")->capture_default_str();
    cmd->add_option("--budget", opt.budget, "enumeration budget")
        ->capture_default_str();
    cmd->add_option("--out", opt.out, "output document path");
    cmd->add_option("--seed", opt.seed, "seed for sampled suites")
        ->capture_default_str();
  };

  add_common(app.add_subcommand("compose", "compose two spans"), 2);
  add_common(app.add_subcommand("product", "product of a family of spans"), 1);
  add_common(app.add_subcommand("coproduct", "coproduct of a family of spans"), 1);
  add_common(app.add_subcommand("restrict", "restrict a span along two functions"), 3);
  add_common(app.add_subcommand("diagonal", "diagonal proarrow on a finite set"), 1);
  add_common(app.add_subcommand("check-universal",
                                "brute-force universal property checks"),
             1);
  add_common(app.add_subcommand("check-iso-strong",
                                "composition comparison for a composable pair"),
             2);
  add_common(app.add_subcommand("check-model", "check a model of a double theory"), 1);
  add_common(app.add_subcommand("check-transformation",
                                "check a transformation between models"),
             1);
  add_common(app.add_subcommand("fam-iso-span",
                                "dictionary check for families over the "
                                "terminal double category"),
             0, false);
  add_common(app.add_subcommand("roundtrip", "parse and reprint canonically"), 0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (app.got_subcommand("compose")) return run_compose(opt);
    if (app.got_subcommand("product")) return run_product(opt, false);
    if (app.got_subcommand("coproduct")) return run_product(opt, true);
    if (app.got_subcommand("restrict")) return run_restrict(opt);
    if (app.got_subcommand("diagonal")) return run_diagonal(opt);
    if (app.got_subcommand("check-universal")) return run_check_universal(opt);
    if (app.got_subcommand("check-iso-strong")) return run_check_iso_strong(opt);
    if (app.got_subcommand("check-model")) return run_check_model(opt);
    if (app.got_subcommand("check-transformation"))
      return run_check_transformation(opt);
    if (app.got_subcommand("fam-iso-span")) return run_fam_iso_span(opt);
    if (app.got_subcommand("roundtrip")) return run_roundtrip(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
