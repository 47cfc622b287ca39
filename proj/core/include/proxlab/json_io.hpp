#pragma once

#include <string>

#include <json.hpp>

#include "proxlab/circle_maps.hpp"
#include "proxlab/grid.hpp"
#include "proxlab/measure.hpp"
#include "proxlab/proximal.hpp"
#include "proxlab/space.hpp"
#include "proxlab/system.hpp"

namespace proxlab {

using json = nlohmann::ordered_json;

json space_to_json(const Space& space);
Space space_from_json(const json& j);

/// Circle/interval points are numbers, torus points "p/q" string pairs,
/// binary sequence points {"left","core","right","origin"} objects, product
/// points two-element arrays.
json point_to_json(const Space& space, const Point& p);
Point point_from_json(const Space& space, const json& j);

json grid_to_json(const Grid& grid);
json mask_to_json(const SubsetMask& mask);  // index array

/// System descriptor parser, e.g. {"kind":"product","f":{"kind":"sqrt_circle"},
/// "g":{"kind":"rotation","alpha":0.6180339887}}. Rotation angles accept
/// decimals or "p/q" strings.
System system_from_json(const json& j);

json horizon_to_json(const HorizonParams& p);
HorizonParams horizon_from_json(const json& j, const HorizonParams& defaults);

/// Atom-list serialization: {"space": ..., "atoms": [[point, weight], ...]}.
json measure_to_json(const AtomicMeasure& mu);

/// Measure descriptor for experiment configs:
///   {"kind":"lebesgue_grid"}                       uniform on the grid
///   {"kind":"atoms","points":[...],"weights":[..]} explicit cloud
///   {"kind":"cesaro","start":<desc>,"n":..,"bin_h":..} averaged under system
AtomicMeasure measure_from_config(const json& desc, const GridPtr& grid, const System& system);

json certificate_to_json(const CertificateReport& rep, bool include_per_center = true);
json measure_report_to_json(const MeasureTestReport& rep, bool include_per_center = true);
json decay_to_json(const DecayReport& rep);
json cw_report_to_json(const CwDistalReport& rep);
json classification_to_json(const ClassificationResult& res);
json return_times_to_json(const ReturnTimes& rt);
json inner_light_to_json(const InnerLightReport& rep);

std::string verdict_name(CertificateVerdict v);
std::string class_name(CircleClass c);

}  // namespace proxlab
