#include "eposic/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "eposic/errors.hpp"

namespace eposic {

double round_to_digits(double v, int digits) {
  if (digits < 1) digits = 1;
  if (digits > 17) digits = 17;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

Json scalar_to_json(const ExactScalar& s, int float_digits, bool exact_only) {
  Json j;
  j["exact"] = s.str();
  if (!exact_only) {
    auto z = s.to_complex();
    j["re"] = round_to_digits(z.real(), float_digits);
    j["im"] = round_to_digits(z.imag(), float_digits);
  }
  return j;
}

Json matrix_to_json(const LinOp& op, int float_digits, bool exact_only) {
  Json j;
  j["domain"] = op.domain().str();
  j["codomain"] = op.codomain().str();
  Json rows = Json::array();
  for (int r = 0; r < op.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < op.cols(); ++c) row.push_back(scalar_to_json(op.at(r, c), float_digits, exact_only));
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

LinOp matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("domain") || !j.contains("codomain") || !j.contains("entries"))
    throw ParseError("matrix JSON needs domain, codomain and entries");
  SpaceLabel domain = SpaceLabel::parse(j.at("domain").get<std::string>());
  SpaceLabel codomain = SpaceLabel::parse(j.at("codomain").get<std::string>());
  const Json& entries = j.at("entries");
  if (!entries.is_array() || static_cast<int>(entries.size()) != codomain.dim())
    throw ParseError("matrix JSON: row count does not match the codomain dimension");
  LinOp out(codomain, domain);
  for (int r = 0; r < out.rows(); ++r) {
    const Json& row = entries.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<int>(row.size()) != domain.dim())
      throw ParseError("matrix JSON: column count does not match the domain dimension");
    for (int c = 0; c < out.cols(); ++c) {
      const Json& cell = row.at(static_cast<std::size_t>(c));
      if (!cell.is_object() || !cell.contains("exact"))
        throw ParseError("matrix JSON: every entry needs an \"exact\" string");
      out.at(r, c) = ExactScalar::parse(cell.at("exact").get<std::string>());
    }
  }
  return out;
}

Superoperator superoperator_from_json(const Json& j) {
  LinOp choi = matrix_from_json(j);
  const SpaceLabel& space = choi.codomain();
  if (choi.domain() != space || space.factor_count() != 2 || space.atom(0).conjugate ||
      !space.atom(1).conjugate || space.atom(0).degree < 0 || space.atom(1).degree < 0)
    throw ParseError("superoperator JSON: Choi matrix must be square on P_m x Pbar_r, got " + space.str());
  const int m = space.atom(0).degree, r = space.atom(1).degree;
  return Superoperator(r, m, std::move(choi));
}

Json index_to_json(const CGIndex& idx) {
  Json j;
  j["m"] = idx.m;
  j["n"] = idx.n;
  j["h"] = idx.h;
  j["r"] = idx.r();
  return j;
}

Json kraus_to_json(const KrausSet& ks, int float_digits, bool exact_only) {
  Json j;
  j["index"] = index_to_json(ks.index);
  Json ops = Json::array();
  for (const LinOp& t : ks.operators) ops.push_back(matrix_to_json(t, float_digits, exact_only));
  j["kraus"] = std::move(ops);
  return j;
}

Json decomposition_to_json(const CovariantDecomposition& d, int float_digits, bool exact_only) {
  Json j;
  j["r"] = d.r;
  j["m"] = d.m;
  Json lambdas = Json::array();
  for (const ExactScalar& l : d.lambdas) lambdas.push_back(scalar_to_json(l, float_digits, exact_only));
  j["lambdas"] = std::move(lambdas);
  j["residual_norm_sq"] = scalar_to_json(d.residual_norm_sq, float_digits, exact_only);
  j["covariant"] = d.is_covariant();
  return j;
}

Json classification_to_json(const Classification& c, int float_digits, bool exact_only) {
  Json j;
  j["classification"] = covariant_class_name(c.kind);
  j["extreme"] = c.extreme;
  j["decomposition"] = decomposition_to_json(c.decomposition, float_digits, exact_only);
  return j;
}

Json verdict_to_json(const PositivityVerdict& v, int float_digits, bool exact_only) {
  Json j;
  j["m"] = v.m;
  j["alpha"] = v.alpha.str();
  j["is_positive"] = v.is_positive;
  j["is_cp"] = v.is_cp;
  if (v.witness.has_value()) {
    j["witness_eigenvalue"] = v.witness->eigenvalue.str();
    if (!exact_only) j["witness_eigenvalue_float"] = round_to_digits(v.witness->eigenvalue.to_double_real(), float_digits);
    Json vec = Json::array();
    for (int i = 0; i < v.witness->vector.dim(); ++i)
      vec.push_back(scalar_to_json(v.witness->vector[i], float_digits, exact_only));
    j["witness_vector"] = std::move(vec);
    j["witness_space"] = v.witness->vector.space().str();
  }
  j["not_n_positive_above_one"] = v.not_n_positive_above_one;
  return j;
}

Json report_to_json(const ChannelReport& r) {
  Json j;
  j["trace_preserving"] = r.trace_preserving;
  j["positive"] = r.positive;
  j["method"] =
      r.method == ChannelReport::Method::ExactProjection ? "exact_projection" : "float_eigenvalues";
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["is_channel"] = r.is_channel();
  return j;
}

Json selftest_to_json(const selftest::SelftestReport& r) {
  Json j;
  j["all_pass"] = r.all_pass();
  Json families = Json::array();
  for (const auto& f : r.families) {
    Json e;
    e["name"] = f.name;
    e["pass"] = f.pass();
    e["checks"] = f.checks;
    e["failures"] = f.failures;
    if (!f.detail.empty()) e["detail"] = f.detail;
    families.push_back(std::move(e));
  }
  j["families"] = std::move(families);
  return j;
}

namespace {

std::string float_str(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

}  // namespace

std::string matrix_to_csv(const LinOp& op, int float_digits) {
  std::ostringstream out;
  out << "row,col,exact,re,im\n";
  for (int r = 0; r < op.rows(); ++r)
    for (int c = 0; c < op.cols(); ++c) {
      auto z = op.at(r, c).to_complex();
      out << r << "," << c << ",\"" << op.at(r, c).str() << "\"," << float_str(z.real(), float_digits)
          << "," << float_str(z.imag(), float_digits) << "\n";
    }
  return out.str();
}

std::string epsilon_table_to_csv(const EpsilonTable& t, int float_digits) {
  std::ostringstream out;
  out << "i,j,exact,float\n";
  for (const auto& [key, eps] : t.entries())
    out << key.first << "," << key.second << ",\"" << eps.str() << "\","
        << float_str(eps.to_complex().real(), float_digits) << "\n";
  return out.str();
}

}  // namespace eposic
