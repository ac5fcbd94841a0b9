#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "zonal/solar.hpp"

using namespace zonal;

namespace {

DateTime at_decimal_hour(int year, int month, int day, double hour) {
    DateTime midnight{year, month, day, 0, 0, 0};
    return add_seconds(midnight, static_cast<std::int64_t>(hour * 3600.0 + 0.5));
}

}  // namespace

TEST_CASE("solar position hits the zenith at an equatorial equinox noon") {
    const double noon = solar_noon_hour(day_of_year({2001, 3, 21}), 0.0, 0.0);
    const SunPosition sun = solar_position(at_decimal_hour(2001, 3, 21, noon), 0.0, 0.0, 0.0);
    CHECK(sun.altitude == Catch::Approx(kPi / 2.0).margin(0.02));
}

TEST_CASE("no extraterrestrial flux below the horizon") {
    const SunPosition sun =
        solar_position(DateTime{2001, 6, 10, 0, 30, 0}, deg2rad(-21.5), deg2rad(55.1), 4.0);
    CHECK(sun.altitude <= 0.0);
    CHECK(sun.extraterrestrial_horizontal == 0.0);
}

TEST_CASE("southern summer solstice noon altitude at 21.5 S") {
    // 90 - |23.45 - 21.5| = 88.05 degrees; independent solar calculators give
    // about 88.0 for Dec 21 at this latitude.
    const int doy = day_of_year({2001, 12, 21});
    const double noon = solar_noon_hour(doy, deg2rad(55.1), 4.0);
    const SunPosition sun =
        solar_position(at_decimal_hour(2001, 12, 21, noon), deg2rad(-21.5), deg2rad(55.1), 4.0);
    CHECK(rad2deg(sun.altitude) == Catch::Approx(88.0).margin(0.3));
    CHECK(std::abs(sun.declination) <= deg2rad(23.45) + 1e-9);
}

TEST_CASE("incidence cosine") {
    SunPosition sun;
    sun.altitude = deg2rad(30.0);
    sun.azimuth = deg2rad(120.0);

    SECTION("horizontal surface sees sin h") {
        CHECK(incidence_cosine(sun, {0.0, 0.0}) == Catch::Approx(0.5).epsilon(1e-12));
    }
    SECTION("surface normal aimed at the sun") {
        const SurfaceOrientation aimed{kPi / 2.0 - sun.altitude, sun.azimuth};
        CHECK(incidence_cosine(sun, aimed) == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("vertical east wall with the sun due west on the horizon") {
        SunPosition low;
        low.altitude = 0.0;
        low.azimuth = deg2rad(270.0);
        const SurfaceOrientation east_wall{kPi / 2.0, deg2rad(90.0)};
        // Oracle: dot product of normal (1,0,0)-east and sun direction (-1,0,0).
        CHECK(incidence_cosine(low, east_wall) == Catch::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("beam projection onto tilted surfaces") {
    SECTION("no beam, no projection") {
        SunPosition sun;
        sun.altitude = deg2rad(45.0);
        CHECK(beam_on_tilted({300.0, 300.0}, sun, {kPi / 2.0, 0.0}) == 0.0);
    }
    SECTION("horizontal surface recovers the horizontal beam") {
        SunPosition sun;
        sun.altitude = deg2rad(45.0);
        sun.azimuth = deg2rad(0.0);
        CHECK(beam_on_tilted({400.0, 0.0}, sun, {0.0, 0.0}) ==
              Catch::Approx(400.0).epsilon(1e-12));
    }
    SECTION("vertical wall facing the sun at 30 degrees altitude") {
        SunPosition sun;
        sun.altitude = deg2rad(30.0);
        sun.azimuth = deg2rad(90.0);
        const double projected =
            beam_on_tilted({300.0, 0.0}, sun, {kPi / 2.0, deg2rad(90.0)});
        CHECK(projected == Catch::Approx(300.0 * std::cos(deg2rad(30.0)) /
                                         std::sin(deg2rad(30.0)))
                               .epsilon(1e-9));  // about 519.6
    }
    SECTION("projection is clamped against low-sun amplification") {
        SunPosition sun;
        sun.altitude = deg2rad(5.5);
        sun.azimuth = deg2rad(90.0);
        CHECK(beam_on_tilted({900.0, 0.0}, sun, {kPi / 2.0, deg2rad(90.0)}) <= kMaxBeam);
    }
    SECTION("zero below the low-sun cutoff") {
        SunPosition sun;
        sun.altitude = deg2rad(3.0);
        sun.azimuth = deg2rad(90.0);
        CHECK(beam_on_tilted({900.0, 0.0}, sun, {kPi / 2.0, deg2rad(90.0)}) == 0.0);
    }
}

TEST_CASE("isotropic sky diffuse") {
    CHECK(diffuse_isotropic({200.0, 100.0}, {0.0, 0.0}) == Catch::Approx(100.0));
    CHECK(diffuse_isotropic({200.0, 100.0}, {kPi / 2.0, 1.0}) == Catch::Approx(50.0));
    CHECK(diffuse_isotropic({400.0, 347.0}, {kPi, 0.0}) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("anisotropic sky diffuse follows the published expression") {
    SECTION("fully overcast horizontal: F = 1, C(0) scales dh") {
        SunPosition sun;
        sun.altitude = deg2rad(40.0);
        sun.extraterrestrial_horizontal = 1000.0;
        const TiltedIrradiance t = diffuse_willmott({300.0, 300.0}, sun, {0.0, 0.0});
        CHECK(t.anisotropy_index == Catch::Approx(1.0));
        CHECK(t.sky_diffuse == Catch::Approx(1.00115 * 300.0).epsilon(1e-12));
    }
    SECTION("vertical surface, mixed sky") {
        // Hand evaluation: F = 1 - (500/1100)*(1 - 100/500) = 0.636364,
        // C(pi/2) = 0.945538, cos i = 0.5, sin h = 0.5
        //   d = (0.636364*0.945538*0.5 + 0.363636*1.0)*100 = 66.4489 W/m².
        SunPosition sun;
        sun.altitude = deg2rad(30.0);
        sun.extraterrestrial_horizontal = 1100.0;
        const double delta = std::acos(0.5 / std::cos(sun.altitude));
        const SurfaceOrientation surf{kPi / 2.0, deg2rad(90.0)};
        sun.azimuth = surf.azimuth + delta;
        REQUIRE(incidence_cosine(sun, surf) == Catch::Approx(0.5).epsilon(1e-12));

        const TiltedIrradiance t = diffuse_willmott({500.0, 100.0}, sun, surf);
        CHECK(t.anisotropy_index == Catch::Approx(0.6363636364).epsilon(1e-9));
        CHECK(t.circumsolar_shape == Catch::Approx(0.9455377).epsilon(1e-6));
        CHECK(t.sky_diffuse == Catch::Approx(66.4489).epsilon(1e-4));
    }
    SECTION("low sun falls back to the isotropic model") {
        SunPosition sun;
        sun.altitude = deg2rad(3.0);
        sun.extraterrestrial_horizontal = 100.0;
        const SurfaceOrientation surf{kPi / 2.0, 0.0};
        const IrradianceSample sample{200.0, 80.0};
        CHECK(diffuse_willmott(sample, sun, surf).sky_diffuse ==
              Catch::Approx(diffuse_isotropic(sample, surf)));
    }
}

TEST_CASE("ground reflection") {
    CHECK(ground_reflected({500.0, 100.0}, 0.2, {0.0, 0.0}) == Catch::Approx(0.0).margin(1e-12));
    CHECK(ground_reflected({500.0, 100.0}, 0.2, {kPi / 2.0, 0.0}) == Catch::Approx(50.0));
    CHECK(ground_reflected({500.0, 100.0}, 0.0, {kPi, 0.0}) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("sky temperature models") {
    CHECK(sky_temperature(20.0, SkyTemperatureModel::Offset) == Catch::Approx(287.15));
    CHECK(sky_temperature(20.0, SkyTemperatureModel::Swinbank) ==
          Catch::Approx(0.0552 * std::pow(293.15, 1.5)).epsilon(1e-12));
    CHECK(sky_temperature(20.0, SkyTemperatureModel::Swinbank) == Catch::Approx(277.06).margin(0.05));
    CHECK(sky_temperature(-6.0, SkyTemperatureModel::Offset) == Catch::Approx(261.15));
}

TEST_CASE("a clear sky with no diffuse gives a zero anisotropy index") {
    SunPosition sun;
    sun.altitude = deg2rad(50.0);
    sun.azimuth = deg2rad(90.0);
    sun.extraterrestrial_horizontal = 1200.0;
    const IrradianceSample sample{1200.0, 0.0};
    const TiltedIrradiance t = diffuse_willmott(sample, sun, {kPi / 2.0, deg2rad(90.0)});
    CHECK(t.anisotropy_index == Catch::Approx(0.0).margin(1e-12));
    // with F = 0 the expression is the pure circumsolar term, dh*cos i/sin h
    const double cs = incidence_cosine(sun, {kPi / 2.0, deg2rad(90.0)}) / std::sin(sun.altitude);
    CHECK(t.sky_diffuse == Catch::Approx(sample.diffuse_horizontal * cs).margin(1e-12));
}

TEST_CASE("willmott equals its closed form for fuzzed inputs") {
    std::mt19937 rng(20240201);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        SunPosition sun;
        sun.altitude = deg2rad(5.0) + u01(rng) * deg2rad(80.0);
        sun.azimuth = u01(rng) * 2.0 * kPi;
        sun.extraterrestrial_horizontal = 200.0 + 1200.0 * u01(rng);
        const double gh = 2.0 + u01(rng) * sun.extraterrestrial_horizontal;
        const IrradianceSample sample{gh, u01(rng) * gh};
        const SurfaceOrientation surf{u01(rng) * kPi, u01(rng) * 2.0 * kPi};

        const TiltedIrradiance t = diffuse_willmott(sample, sun, surf);
        const double k_iso = 0.5 * (1.0 + std::cos(surf.tilt));
        const double cs =
            std::max(incidence_cosine(sun, surf), 0.0) / std::sin(sun.altitude);
        const double expected = (t.anisotropy_index * t.circumsolar_shape * k_iso +
                                 (1.0 - t.anisotropy_index) * cs) *
                                sample.diffuse_horizontal;
        REQUIRE(t.sky_diffuse == Catch::Approx(std::max(expected, 0.0)).margin(1e-9));
        REQUIRE(t.anisotropy_index >= 0.0);
        REQUIRE(t.anisotropy_index <= 1.0);
        REQUIRE(t.sky_diffuse >= 0.0);

        // Term-by-term ordering vs the isotropic model: the isotropic residue
        // is bounded by F*k*dh whenever C(s) <= 1 (s above ~0.033 rad), and
        // the circumsolar term by (1-F)*k*dh whenever cos i/sin h <= k.
        if (t.circumsolar_shape <= 1.0 && cs <= k_iso) {
            REQUIRE(t.sky_diffuse <=
                    diffuse_isotropic(sample, surf) + 1e-9 * (1.0 + t.sky_diffuse));
        }
        // Sun behind the surface: anisotropic never exceeds isotropic.
        if (incidence_cosine(sun, surf) <= 0.0 && surf.tilt >= 0.04) {
            REQUIRE(t.sky_diffuse <=
                    diffuse_isotropic(sample, surf) + 1e-9 * (1.0 + t.sky_diffuse));
        }
    }
}

TEST_CASE("all solar outputs are nonnegative under fuzz") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        const DateTime t{2001, 1 + static_cast<int>(u01(rng) * 11.99),
                         1 + static_cast<int>(u01(rng) * 27.99),
                         static_cast<int>(u01(rng) * 23.99), 0, 0};
        const double lat = deg2rad(-80.0 + 160.0 * u01(rng));
        const double lon = deg2rad(-180.0 + 360.0 * u01(rng));
        const SunPosition sun = solar_position(t, lat, lon, std::floor(u01(rng) * 25.0 - 12.0));
        REQUIRE(sun.extraterrestrial_horizontal >= 0.0);
        REQUIRE(sun.extraterrestrial_horizontal <= 1367.0 * 1.034);
        REQUIRE(std::abs(sun.declination) <= deg2rad(23.45) + 1e-9);
        REQUIRE(std::abs(sun.altitude) <= kPi / 2.0 + 1e-9);

        const double gh = u01(rng) * 1100.0;
        const IrradianceSample sample{gh, u01(rng) * gh};
        const SurfaceOrientation surf{u01(rng) * kPi, u01(rng) * 2.0 * kPi};
        REQUIRE(beam_on_tilted(sample, sun, surf) >= 0.0);
        REQUIRE(diffuse_isotropic(sample, surf) >= -1e-12);
        REQUIRE(diffuse_willmott(sample, sun, surf).sky_diffuse >= 0.0);
        REQUIRE(ground_reflected(sample, u01(rng), surf) >= -1e-12);
    }
}

TEST_CASE("altitude is symmetric about solar noon over fuzzed days") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const int month = 1 + static_cast<int>(u01(rng) * 11.99);
        const int day = 1 + static_cast<int>(u01(rng) * 27.99);
        const double lat = deg2rad(-65.0 + 130.0 * u01(rng));
        const double lon_deg = -170.0 + 340.0 * u01(rng);
        const double lon = deg2rad(lon_deg);
        // time zone roughly matched to the meridian, as real sites are
        const double offset = std::round(lon_deg / 15.0) + std::floor(u01(rng) * 3.0 - 1.0);
        const double noon = solar_noon_hour(day_of_year({2001, month, day}), lon, offset);
        for (int dh = 1; dh <= 5; ++dh) {
            const SunPosition before =
                solar_position(at_decimal_hour(2001, month, day, noon - dh), lat, lon, offset);
            const SunPosition after =
                solar_position(at_decimal_hour(2001, month, day, noon + dh), lat, lon, offset);
            REQUIRE(std::abs(before.altitude - after.altitude) < 0.01);
        }
    }
}

TEST_CASE("clearness ratio above one is clamped in the anisotropy index") {
    // measurement noise can push Gh past the extraterrestrial value
    SunPosition sun;
    sun.altitude = deg2rad(40.0);
    sun.azimuth = 0.0;
    sun.extraterrestrial_horizontal = 600.0;
    const IrradianceSample sample{1200.0, 360.0};  // Gh twice Gh_ext, dh/Gh = 0.3
    const TiltedIrradiance t = diffuse_willmott(sample, sun, {kPi / 2.0, 0.0});
    CHECK(t.anisotropy_index == Catch::Approx(0.3).epsilon(1e-12));
}
