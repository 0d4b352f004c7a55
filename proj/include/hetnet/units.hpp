#pragma once

#include <cmath>

namespace hetnet::units {

inline constexpr double speed_of_light = 2.998e8;  // m/s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double ln2 = 0.69314718055994530942;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

// Optimizers work in Mbps and Watts so that unit step sizes stay well scaled.
inline constexpr double bits_per_megabit = 1e6;
inline double to_mega(double x) { return x / bits_per_megabit; }
inline double from_mega(double x) { return x * bits_per_megabit; }

}  // namespace hetnet::units
