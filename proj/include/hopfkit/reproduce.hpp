#pragma once

#include <string>
#include <vector>

#include "hopfkit/types.hpp"

namespace hopfkit {

std::string fmt9(double x);
std::string fmt9(cplx z);

struct Row {
  std::string name;
  std::string expected;
  std::string computed;
  std::string tolerance;
  bool pass = false;
  bool informational = false;  // reported, not counted
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Row> rows;
  double seconds = 0;
  double time_budget = 0;
  std::string error;  // exception text when the pipeline aborted
  bool pass() const;
};

// Criteria 1..8.
int criterion_count();
CriterionResult run_criterion(int id);

}  // namespace hopfkit
