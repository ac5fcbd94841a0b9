// Solar geometry and the two selectable sky-diffuse reconstruction models
// (isotropic and Willmott anisotropic), plus beam projection, ground
// reflection and sky temperature.
//
// Conventions: angles in radians internally; azimuths measured from north,
// clockwise (N=0, E=pi/2); tilt s=0 is horizontal facing up, s=pi facing
// down. Altitude h is measured from the horizon.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zonal/datetime.hpp"
#include "zonal/errors.hpp"

namespace zonal {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSolarConstant = 1367.0;       // W/m²
inline constexpr double kMaxBeam = 1.05 * 1367.0;      // clamp on tilted beam, W/m²
inline constexpr double kMinSunAltitude = 5.0 * kPi / 180.0;  // circumsolar cutoff

inline constexpr double deg2rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

struct SunPosition {
    double altitude = 0.0;        // rad, from horizon
    double azimuth = 0.0;         // rad, from north clockwise
    double declination = 0.0;     // rad
    double extraterrestrial_horizontal = 0.0;  // Gh_ext, W/m²
};

struct SurfaceOrientation {
    double tilt = 0.0;     // s, rad; 0 horizontal up, pi/2 vertical, pi down
    double azimuth = 0.0;  // gamma, rad from north clockwise
};

struct IrradianceSample {
    double global_horizontal = 0.0;   // Gh, W/m²
    double diffuse_horizontal = 0.0;  // dh, W/m²

    double beam_horizontal() const {
        return std::max(0.0, global_horizontal - diffuse_horizontal);
    }
};

// Reconstructed irradiance on a tilted plane, split by character.
struct TiltedIrradiance {
    double beam = 0.0;             // W/m², directional (includes circumsolar share
                                   // when the anisotropic model is selected)
    double sky_diffuse = 0.0;      // W/m², hemispherical part
    double ground_reflected = 0.0; // W/m²
    double anisotropy_index = 1.0; // F of the anisotropic model, clamped [0,1]
    double circumsolar_shape = 1.0;// C(s)

    double total() const { return beam + sky_diffuse + ground_reflected; }
};

enum class DiffuseModel { Isotropic, Willmott };
enum class SkyTemperatureModel { Offset, Swinbank };

namespace detail {

// Spencer-style equation of time, minutes.
inline double equation_of_time_minutes(int doy) {
    const double b = 2.0 * kPi * (doy - 81) / 364.0;
    return 9.87 * std::sin(2.0 * b) - 7.53 * std::cos(b) - 1.5 * std::sin(b);
}

inline double declination(int doy) {
    return deg2rad(23.45) * std::sin(2.0 * kPi * (284.0 + doy) / 365.0);
}

inline double eccentricity(int doy) {
    return 1.0 + 0.033 * std::cos(2.0 * kPi * doy / 365.0);
}

}  // namespace detail

// Civil clock hour at which the hour angle is zero for the given site.
inline double solar_noon_hour(int doy, double longitude_rad, double utc_offset_hours) {
    const double lon_deg = rad2deg(longitude_rad);
    const double meridian_deg = 15.0 * utc_offset_hours;
    return 12.0 - detail::equation_of_time_minutes(doy) / 60.0 -
           (lon_deg - meridian_deg) / 15.0;
}

// Sun altitude/azimuth and extraterrestrial horizontal irradiance for a civil
// timestamp at a site. Total function: any valid timestamp yields a result.
inline SunPosition solar_position(const DateTime& when, double latitude_rad,
                                  double longitude_rad, double utc_offset_hours) {
    const int doy = day_of_year(when);
    const double decl = detail::declination(doy);
    const double solar_hour =
        hour_of_day(when) - (solar_noon_hour(doy, longitude_rad, utc_offset_hours) - 12.0);
    const double hour_angle = deg2rad(15.0) * (solar_hour - 12.0);

    const double sin_h = std::sin(latitude_rad) * std::sin(decl) +
                         std::cos(latitude_rad) * std::cos(decl) * std::cos(hour_angle);
    const double h = std::asin(std::clamp(sin_h, -1.0, 1.0));

    // Azimuth from north, clockwise; atan2 form is sign-safe at all latitudes.
    const double az_y = std::sin(hour_angle) * std::cos(decl);
    const double az_x = std::cos(hour_angle) * std::cos(decl) * std::sin(latitude_rad) -
                        std::sin(decl) * std::cos(latitude_rad);
    double azimuth = std::atan2(az_y, az_x) + kPi;  // 0 at north
    if (azimuth >= 2.0 * kPi) azimuth -= 2.0 * kPi;

    SunPosition sun;
    sun.altitude = h;
    sun.azimuth = azimuth;
    sun.declination = decl;
    sun.extraterrestrial_horizontal =
        kSolarConstant * detail::eccentricity(doy) * std::max(sin_h, 0.0);
    return sun;
}

// cos of the incidence angle between the sun direction and the surface normal.
inline double incidence_cosine(const SunPosition& sun, const SurfaceOrientation& surf) {
    return std::sin(sun.altitude) * std::cos(surf.tilt) +
           std::cos(sun.altitude) * std::sin(surf.tilt) *
               std::cos(sun.azimuth - surf.azimuth);
}

// Beam irradiance on the tilted plane: Bh * max(cos i, 0) / sin h, clamped.
inline double beam_on_tilted(const IrradianceSample& sample, const SunPosition& sun,
                             const SurfaceOrientation& surf) {
    if (sun.altitude <= kMinSunAltitude) return 0.0;
    const double cos_i = incidence_cosine(sun, surf);
    if (cos_i <= 0.0) return 0.0;
    const double beam = sample.beam_horizontal() * cos_i / std::sin(sun.altitude);
    return std::min(beam, kMaxBeam);
}

// Isotropic sky diffuse on a tilt: d(s,gamma) = (1+cos s)/2 * dh.
inline double diffuse_isotropic(const IrradianceSample& sample,
                                const SurfaceOrientation& surf) {
    return 0.5 * (1.0 + std::cos(surf.tilt)) * sample.diffuse_horizontal;
}

// C(s) with s in radians; near-unity correction on the isotropic part.
inline double willmott_shape(double tilt_rad) {
    return 1.00115 - 3.54e-2 * tilt_rad - 2.46e-6 * tilt_rad * tilt_rad;
}

// Anisotropy index F = 1 - Gh/Gh_ext * (1 - dh/Gh), clamped to [0,1];
// the clearness ratio Gh/Gh_ext is clamped to <= 1 against measurement noise.
inline double willmott_anisotropy(const IrradianceSample& sample, double gh_ext) {
    if (sample.global_horizontal <= 0.0 || gh_ext <= 0.0) return 1.0;
    const double clearness = std::min(sample.global_horizontal / gh_ext, 1.0);
    const double diffuse_fraction =
        std::clamp(sample.diffuse_horizontal / sample.global_horizontal, 0.0, 1.0);
    return std::clamp(1.0 - clearness * (1.0 - diffuse_fraction), 0.0, 1.0);
}

// Anisotropic (Willmott) sky diffuse on a tilt:
//   d = (F*C(s)*(1+cos s)/2 + (1-F)*max(cos i,0)/sin h) * dh
// Falls back to the isotropic model when the sun is too low or Gh is
// negligible (the circumsolar term diverges as sin h -> 0).
inline TiltedIrradiance diffuse_willmott(const IrradianceSample& sample,
                                         const SunPosition& sun,
                                         const SurfaceOrientation& surf) {
    TiltedIrradiance out;
    out.circumsolar_shape = willmott_shape(surf.tilt);
    if (sun.altitude < kMinSunAltitude || sample.global_horizontal <= 1.0 ||
        sun.extraterrestrial_horizontal <= 0.0) {
        out.anisotropy_index = 1.0;
        out.sky_diffuse = diffuse_isotropic(sample, surf);
        return out;
    }
    const double f = willmott_anisotropy(sample, sun.extraterrestrial_horizontal);
    const double cos_i = incidence_cosine(sun, surf);
    const double circumsolar = std::max(cos_i, 0.0) / std::sin(sun.altitude);
    const double iso_term = f * out.circumsolar_shape * 0.5 * (1.0 + std::cos(surf.tilt));
    out.anisotropy_index = f;
    out.sky_diffuse =
        std::max(0.0, (iso_term + (1.0 - f) * circumsolar) * sample.diffuse_horizontal);
    return out;
}

// Ground-reflected diffuse: albedo * Gh * (1-cos s)/2.
inline double ground_reflected(const IrradianceSample& sample, double albedo,
                               const SurfaceOrientation& surf) {
    return albedo * sample.global_horizontal * 0.5 * (1.0 - std::cos(surf.tilt));
}

// Effective sky temperature in K for exterior longwave exchange.
inline double sky_temperature(double dry_bulb_c, SkyTemperatureModel model) {
    const double t_air_k = dry_bulb_c + 273.15;
    switch (model) {
        case SkyTemperatureModel::Offset:
            return t_air_k - 6.0;
        case SkyTemperatureModel::Swinbank:
            return 0.0552 * std::pow(t_air_k, 1.5);
    }
    throw ValidationError("unknown sky temperature model selection");
}

}  // namespace zonal
