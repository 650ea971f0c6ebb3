#include "cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "eposic/json_io.hpp"

namespace eposic::cli {

namespace {

struct Options {
  int m = 0, n = 0, h = 0, r = 0;
  std::string choi_path;
  std::string format = "json";
  bool exact = false;
  int float_digits = 17;
  int max_degree = 3;
  long float_samples = 10000;
  bool corrupt_epsilon = false;
  bool epsilon = false;
};

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  Json j;
  in >> j;
  return j;
}

int run_alpha(const Options& o, std::ostream& out) {
  const CGIndex idx(o.m, o.n, o.h);
  if (o.epsilon) {
    const EpsilonTable& table = epsilon_table(idx);
    if (o.format == "csv") {
      out << epsilon_table_to_csv(table, o.float_digits);
      return 0;
    }
    Json j;
    j["index"] = index_to_json(idx);
    Json rows = Json::array();
    for (const auto& [key, eps] : table.entries()) {
      Json e;
      e["i"] = key.first;
      e["j"] = key.second;
      e["exact"] = eps.str();
      if (!o.exact) e["float"] = round_to_digits(eps.to_complex().real(), o.float_digits);
      rows.push_back(std::move(e));
    }
    j["epsilon"] = std::move(rows);
    emit(out, j);
    return 0;
  }
  const LinOp& a = alpha(idx);
  if (o.format == "csv") {
    out << matrix_to_csv(a, o.float_digits);
    return 0;
  }
  Json j;
  j["index"] = index_to_json(idx);
  j["matrix"] = matrix_to_json(a, o.float_digits, o.exact);
  emit(out, j);
  return 0;
}

int run_kraus(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.format == "csv") {
    err << "kraus: csv output is not defined for operator lists; use json\n";
    return 2;
  }
  EposicChannel ch(CGIndex(o.m, o.n, o.h));
  emit(out, kraus_to_json(ch.kraus(), o.float_digits, o.exact));
  return 0;
}

int run_choi(const Options& o, std::ostream& out) {
  EposicChannel ch(CGIndex(o.m, o.n, o.h));
  const LinOp& c = ch.choi();
  if (o.format == "csv") {
    out << matrix_to_csv(c, o.float_digits);
    return 0;
  }
  Json j;
  j["index"] = index_to_json(ch.index());
  j["trace"] = scalar_to_json(trace(c), o.float_digits, o.exact);
  j["matrix"] = matrix_to_json(c, o.float_digits, o.exact);
  emit(out, j);
  return 0;
}

int run_enumerate(const Options& o, std::ostream& out) {
  auto ec = enumerate_ec(o.r, o.m);
  if (o.format == "csv") {
    out << "l,m,n,h,r\n";
    for (std::size_t l = 0; l < ec.size(); ++l) {
      const CGIndex& idx = ec[l].index();
      out << l << "," << idx.m << "," << idx.n << "," << idx.h << "," << idx.r() << "\n";
    }
    return 0;
  }
  Json j;
  j["r"] = o.r;
  j["m"] = o.m;
  j["count"] = ec.size();
  Json channels = Json::array();
  for (const auto& ch : ec) channels.push_back(index_to_json(ch.index()));
  j["channels"] = std::move(channels);
  emit(out, j);
  return 0;
}

int run_verify(const Options& o, std::ostream& out, bool have_file) {
  ChannelReport report = have_file
                             ? verify_channel(superoperator_from_json(load_json_file(o.choi_path)))
                             : verify_channel(Superoperator::from_channel(
                                   EposicChannel(CGIndex(o.m, o.n, o.h))));
  emit(out, report_to_json(report));
  return report.is_channel() ? 0 : 1;
}

int run_decompose(const Options& o, std::ostream& out) {
  Superoperator s = superoperator_from_json(load_json_file(o.choi_path));
  emit(out, decomposition_to_json(decompose(s), o.float_digits, o.exact));
  return 0;
}

int run_classify(const Options& o, std::ostream& out) {
  Superoperator s = superoperator_from_json(load_json_file(o.choi_path));
  emit(out, classification_to_json(classify(s), o.float_digits, o.exact));
  return 0;
}

int run_positivity(const Options& o, const std::string& alpha_text, std::ostream& out) {
  emit(out, verdict_to_json(analyze_family(o.m, Rational::parse(alpha_text)), o.float_digits, o.exact));
  return 0;
}

int run_selftest(const Options& o, std::ostream& out) {
  selftest::SelftestOptions opts;
  opts.max_degree = o.max_degree;
  opts.float_samples = o.float_samples;
  opts.corrupt_epsilon = o.corrupt_epsilon;
  selftest::SelftestReport report = selftest::run_selftest(opts);
  if (o.format == "json") {
    emit(out, selftest_to_json(report));
  } else {
    for (const auto& f : report.families) {
      if (f.pass())
        out << "PASS " << f.name << " (" << f.checks << " checks)\n";
      else
        out << "FAIL " << f.name << " (" << f.failures << "/" << f.checks << " failed): " << f.detail
            << "\n";
    }
    out << (report.all_pass() ? "all families passed\n" : "selftest FAILED\n");
  }
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Clebsch-Gordan isometries and SU(2)-covariant channel analysis"};
  app.require_subcommand(1);

  Options o;
  std::string alpha_text = "0/1";
  int exit_code = 0;

  if (const char* cache = std::getenv("EPOSIC_CACHE_DIR"); cache != nullptr && *cache != '\0')
    set_epsilon_cache_dir(cache);

  // The index flag --h needs the single-letter name, so subcommands carry
  // only the long help flag.
  auto new_cmd = [&](const std::string& name, const std::string& desc) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->set_help_flag("--help", "Print help and exit");
    return cmd;
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--exact", o.exact, "Emit exact strings only, no float fields");
    cmd->add_option("--float-digits", o.float_digits, "Significant digits for float fields")
        ->check(CLI::Range(1, 17));
  };
  auto add_index = [&](CLI::App* cmd) {
    cmd->add_option("--m", o.m, "Output degree m")->required();
    cmd->add_option("--n", o.n, "Environment degree n")->required();
    cmd->add_option("--h", o.h, "Clebsch-Gordan step h")->required();
  };

  CLI::App* alpha_cmd = new_cmd("alpha", "Isometry P_r -> P_m (x) P_n");
  add_index(alpha_cmd);
  add_common(alpha_cmd);
  alpha_cmd->add_flag("--epsilon", o.epsilon, "Emit the coefficient table instead of the matrix");
  alpha_cmd->callback([&] { exit_code = run_alpha(o, out); });

  CLI::App* kraus_cmd = new_cmd("kraus", "Kraus operators of the channel");
  add_index(kraus_cmd);
  add_common(kraus_cmd);
  kraus_cmd->callback([&] { exit_code = run_kraus(o, out, err); });

  CLI::App* choi_cmd = new_cmd("choi", "Choi matrix of the channel");
  add_index(choi_cmd);
  add_common(choi_cmd);
  choi_cmd->callback([&] { exit_code = run_choi(o, out); });

  CLI::App* enum_cmd = new_cmd("enumerate", "List EC(r, m)");
  enum_cmd->add_option("--r", o.r, "Input degree r")->required();
  enum_cmd->add_option("--m", o.m, "Output degree m")->required();
  add_common(enum_cmd);
  enum_cmd->callback([&] { exit_code = run_enumerate(o, out); });

  CLI::App* verify_cmd = new_cmd("verify", "Channel test for a Choi matrix");
  auto* vm = verify_cmd->add_option("--m", o.m, "Output degree m");
  auto* vn = verify_cmd->add_option("--n", o.n, "Environment degree n");
  auto* vh = verify_cmd->add_option("--h", o.h, "Clebsch-Gordan step h");
  auto* vfile = verify_cmd->add_option("--choi", o.choi_path, "Choi matrix JSON file");
  vm->needs(vn)->needs(vh);
  vfile->excludes(vm);
  add_common(verify_cmd);
  verify_cmd->callback([&] {
    if (!*vfile && !*vm) throw CLI::RequiredError("verify: either --choi or --m/--n/--h");
    exit_code = run_verify(o, out, static_cast<bool>(*vfile));
  });

  CLI::App* decompose_cmd = new_cmd("decompose", "Expand a Choi matrix over EC(r, m)");
  decompose_cmd->add_option("--choi", o.choi_path, "Choi matrix JSON file")->required();
  add_common(decompose_cmd);
  decompose_cmd->callback([&] { exit_code = run_decompose(o, out); });

  CLI::App* classify_cmd = new_cmd("classify", "Covariance/CP classification");
  classify_cmd->add_option("--choi", o.choi_path, "Choi matrix JSON file")->required();
  add_common(classify_cmd);
  classify_cmd->callback([&] { exit_code = run_classify(o, out); });

  CLI::App* pos_cmd = new_cmd("positivity", "Analyze Phi_plus - alpha Phi_minus");
  pos_cmd->add_option("--m", o.m, "Degree m >= 1")->required();
  pos_cmd->add_option("--alpha", alpha_text, "Rational weight P/Q")->required();
  add_common(pos_cmd);
  pos_cmd->callback([&] { exit_code = run_positivity(o, alpha_text, out); });

  CLI::App* selftest_cmd = new_cmd("selftest", "Run the invariant suite");
  selftest_cmd->add_option("--max-degree", o.max_degree, "Degree bound for the exact sweeps")
      ->check(CLI::Range(1, 8));
  selftest_cmd->add_option("--float-samples", o.float_samples, "Group elements for float sampling");
  selftest_cmd->add_flag("--corrupt-epsilon", o.corrupt_epsilon)->group("");  // test fixture
  selftest_cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  selftest_cmd->callback([&] { exit_code = run_selftest(o, out); });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const InternalCheckFailure& e) {
    err << "internal check failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

}  // namespace eposic::cli
