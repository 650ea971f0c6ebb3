#pragma once

#include <json.hpp>

#include <string>

#include "eposic/covariant.hpp"
#include "eposic/selftest.hpp"

namespace eposic {

// Insertion-ordered JSON keeps emitted documents byte-stable.
using Json = nlohmann::ordered_json;

// Round to the given number of significant digits (1..17).
double round_to_digits(double v, int digits);

// {"exact": "...", "re": ..., "im": ...}; exact_only drops the float fields.
Json scalar_to_json(const ExactScalar& s, int float_digits, bool exact_only);

// { "domain": label, "codomain": label, "entries": [[entry, ...], ...] }
// with rows indexed by the codomain basis and columns by the domain basis.
Json matrix_to_json(const LinOp& op, int float_digits, bool exact_only);

// Inverse of matrix_to_json; entries are read from their "exact" strings.
LinOp matrix_from_json(const Json& j);

// Reads a Choi matrix on P_m (x) conj(P_r) and wraps it as a superoperator.
Superoperator superoperator_from_json(const Json& j);

Json index_to_json(const CGIndex& idx);
Json kraus_to_json(const KrausSet& ks, int float_digits, bool exact_only);
Json decomposition_to_json(const CovariantDecomposition& d, int float_digits, bool exact_only);
Json classification_to_json(const Classification& c, int float_digits, bool exact_only);
Json verdict_to_json(const PositivityVerdict& v, int float_digits, bool exact_only);
Json report_to_json(const ChannelReport& r);
Json selftest_to_json(const selftest::SelftestReport& r);

// "row,col,exact,re,im" lines, 0-based indices in the canonical basis order.
std::string matrix_to_csv(const LinOp& op, int float_digits);

// "i,j,exact,float" lines over the stored band entries.
std::string epsilon_table_to_csv(const EpsilonTable& t, int float_digits);

}  // namespace eposic
