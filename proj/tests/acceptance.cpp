// Usage: acceptance [criterion-id ...]; no arguments runs all criteria.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "hopfkit/reproduce.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int i = 1; i <= hopfkit::criterion_count(); ++i) ids.push_back(i);

  bool all = true;
  for (int id : ids) {
    const auto r = hopfkit::run_criterion(id);
    for (const auto& row : r.rows)
      std::printf("    %s %-48s expected %-26s computed %-34s tol %s\n",
                  row.informational ? "[info]" : (row.pass ? "[ ok ]" : "[FAIL]"), row.name.c_str(),
                  row.expected.c_str(), row.computed.c_str(), row.tolerance.c_str());
    if (!r.error.empty()) std::printf("    error: %s\n", r.error.c_str());
    std::printf("criterion %d: %s  %s (%.2f s)\n", r.id, r.pass() ? "PASS" : "FAIL", r.title.c_str(), r.seconds);
    all = all && r.pass();
  }
  return all ? 0 : 1;
}
