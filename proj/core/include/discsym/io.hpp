#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "discsym/grid_field.hpp"
#include "discsym/polygon.hpp"
#include "discsym/interval_flow.hpp"
#include "discsym/rigidity_harness.hpp"
#include "discsym/symmetry_analysis.hpp"
#include "discsym/vstate_solver.hpp"

namespace discsym {

/// GridField CSV: "n,h", then "<n>,<h>", then n rows of n values (%.17g),
/// row j = 0 first.
void write_grid_field(std::ostream& out, const GridField& f);
/// Throws ParseError on malformed input or a size/spacing mismatch.
GridField read_grid_field(std::istream& in);

/// Patch file:
///
///   vpatch 1
///   component
///   weight 2.0        (optional, default 1)
///   outer N
///   x y               (N lines)
///   hole N            (zero or more)
///   x y
///
/// Blank lines and '#' comments are ignored.
struct PatchInput {
  MultiScalePatch patch;
  /// Set when every weight is 1.
  std::optional<PatchSpec> plain;
};
PatchInput read_patch(std::istream& in);
void write_patch(std::ostream& out, const PatchSpec& patch);
void write_patch(std::ostream& out, const MultiScalePatch& patch);

/// Shortest round-trip decimal of x.
std::string format_number(double x);

/// {regime, stages: [{name, status, data}], verdict} with two-space indent.
std::string verdict_json(const VerdictRecord& rec);

/// Rows stage,report,t,q,ratio,verdict for every OSmallReport in the record.
void write_osmall_csv(std::ostream& out, const VerdictRecord& rec);

/// Header omega,amplitude,residual_norm,a1..aJ.
void write_branch_csv(std::ostream& out, const std::vector<BranchPoint>& branch);
/// gnuplot script plotting amplitude against omega from csv_name.
std::string branch_gnuplot(const std::string& csv_name);

/// {pass, directions: [...], decomposition?}.
std::string symmetry_json(const std::vector<SymmetryReport>& reports,
                          const std::optional<AnnularDecomposition>& decomposition);

/// Event times, every intermediate state and the result, each state a list of
/// [a, b] endpoint pairs.
std::string flow_trace_json(const FlowTrace& trace, const IntervalUnion& result);

/// "key = value" lines; '#' starts a comment. Throws ParseError on lines
/// without '=' or with an empty key.
std::map<std::string, std::string> read_config(std::istream& in);

}  // namespace discsym
