#pragma once

#include <json.hpp>

#include "hopfkit/dispersion.hpp"
#include "hopfkit/hopf_multiple.hpp"
#include "hopfkit/hopf_single.hpp"
#include "hopfkit/pde_sim.hpp"
#include "hopfkit/spectral.hpp"

namespace hopfkit::cli {

using json = nlohmann::ordered_json;

// Doubles are rounded to 9 significant digits before emission.
double r9(double x);
json num(double x);
json num(cplx z);
json vec(const Vec4& v);
json vec(const CVec4& v);
json mat(const Mat4& m);
json mat(const CMat4& m);

json to_json(const Model& m);
json to_json(const StructureReport& r);
json to_json(const ReflectionReport& r);
json to_json(const CrossingResult& c);
json to_json(const CriticalEigenData& d);
json to_json(const NonresonanceReport& r);
json to_json(const ResolventDecayReport& r);
json to_json(const SemisimplicityReport& r);
json to_json(const HopfSingleReport& r);
json to_json(const ReducedSystem& r);
json to_json(const SimDiagnostics& d);

}  // namespace hopfkit::cli
