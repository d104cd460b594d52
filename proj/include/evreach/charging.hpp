#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evreach/scenario.hpp"

namespace evreach {

enum class Coupling { ac, dc };

struct ChargerLevel {
  std::string label;   // "L1", "L2", "L3", ...
  double power_kw = 0.0;
  Coupling coupling = Coupling::ac;
};

struct ChargeTimeEstimate {
  std::string vehicle;
  std::string charger;
  double effective_power_kw = 0.0;
  std::int64_t duration_minutes = 0;
};

// AC charging is capped by the vehicle's onboard converter; DC bypasses it.
double effective_power_kw(const ChargerLevel& charger,
                          const VehicleSpec& vehicle);

// Full 0-100% charge duration in whole minutes, truncated. Truncation (not
// half-up) is what reproduces the published per-level waiting times.
ChargeTimeEstimate full_charge_time(const VehicleSpec& vehicle,
                                    const ChargerLevel& charger);

// "6h 27m". With short_exact_hours, whole hours drop the minutes part: "2h".
std::string format_duration(std::int64_t minutes,
                            bool short_exact_hours = false);

// Table 2 defaults: L1 at the 2.4 kW nominal outlet rating plus the 2.3 kW
// effective variant observed in published waiting times, L2 11 kW AC,
// L3 50 kW DC.
std::vector<ChargerLevel> default_charger_levels();

}  // namespace evreach
