#pragma once

#include <string>

#include "json.hpp"
#include "specflow/asymptotics.hpp"
#include "specflow/galerkin.hpp"
#include "specflow/jacobi.hpp"
#include "specflow/model.hpp"
#include "specflow/spectral.hpp"

namespace specflow::io {

// Deterministic serialization: insertion-ordered keys, floating-point values
// at 15 significant digits.  Identical inputs produce byte-identical output.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

std::string format_double(double v);

nlohmann::ordered_json to_json(const ValidationReport& rep);
nlohmann::ordered_json to_json(const MonodromyData& mono,
                               const Nullities& nulls,
                               const std::string& label);
nlohmann::ordered_json to_json(const LambdaProfile& prof,
                               const std::string& label);
nlohmann::ordered_json to_json(const GrowthReport& rep,
                               const std::string& label);

struct IterateRow {
  int N = 0;
  int sf_fourier = 0;
  int sf_direct = 0;
  int sf_reduction = 0;
  bool agree = true;
};

nlohmann::ordered_json to_json(const std::vector<IterateRow>& rows,
                               const std::string& label);

std::string profile_csv(const LambdaProfile& prof);  // (theta, lambda) plot data
std::string arcs_csv(const LambdaProfile& prof);     // per-arc table
std::string iterate_csv(const std::vector<IterateRow>& rows);
std::string growth_csv(const GrowthReport& rep);
std::string branches_csv(const BranchData& branches);

void write_file(const std::string& path, const std::string& content);

}  // namespace specflow::io
