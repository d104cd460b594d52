#include "evreach/charging.hpp"

#include <algorithm>
#include <cmath>

#include "evreach/errors.hpp"

namespace evreach {

double effective_power_kw(const ChargerLevel& charger,
                          const VehicleSpec& vehicle) {
  if (charger.coupling == Coupling::dc) return charger.power_kw;
  return std::min(charger.power_kw, vehicle.onboard_ac_cap_kw);
}

ChargeTimeEstimate full_charge_time(const VehicleSpec& vehicle,
                                    const ChargerLevel& charger) {
  if (vehicle.battery_kwh <= 0.0) {
    throw ConfigError("vehicle `" + vehicle.name + "` has non-positive battery");
  }
  if (charger.power_kw <= 0.0 ||
      (charger.coupling == Coupling::ac && vehicle.onboard_ac_cap_kw <= 0.0)) {
    throw ConfigError("charger `" + charger.label + "` yields non-positive power");
  }
  const double power = effective_power_kw(charger, vehicle);
  const double minutes = 60.0 * vehicle.battery_kwh / power;
  return {vehicle.name, charger.label, power,
          static_cast<std::int64_t>(std::floor(minutes))};
}

std::string format_duration(std::int64_t minutes, bool short_exact_hours) {
  const std::int64_t hours = minutes / 60;
  const std::int64_t rem = minutes % 60;
  if (short_exact_hours && rem == 0 && minutes > 0) {
    return std::to_string(hours) + "h";
  }
  return std::to_string(hours) + "h " + std::to_string(rem) + "m";
}

std::vector<ChargerLevel> default_charger_levels() {
  return {
      {"L1", 2.4, Coupling::ac},
      {"L1-effective", 2.3, Coupling::ac},
      {"L2", 11.0, Coupling::ac},
      {"L3", 50.0, Coupling::dc},
  };
}

}  // namespace evreach
