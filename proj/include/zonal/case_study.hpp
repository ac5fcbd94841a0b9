// Bundled three-zone reference building: a 6 m cube on grade split into a
// ground floor and an east/west first floor, dense-concrete envelope, one
// 4 m² single-glazed bay on the east and west façades, and an air conditioner
// in the western first-floor zone.
#pragma once

#include "zonal/building.hpp"

namespace zonal {

inline Building case_study_building() {
    Building b;
    b.name = "three-zone cube";

    b.site.latitude = deg2rad(-21.5);   // tropical site, southern hemisphere
    b.site.longitude = deg2rad(55.1);
    b.site.altitude = 0.0;
    b.site.albedo = 0.2;
    b.site.utc_offset_hours = 4.0;

    b.models.exterior_convection = ExteriorConvectionModel::WindDriven;
    b.models.diffuse = DiffuseModel::Isotropic;
    b.models.sky_temperature = SkyTemperatureModel::Swinbank;
    b.models.airflow = AirflowModel::PressureNetwork;

    // Handbook values for dense concrete; the 12 cm walls and the 30 cm slab
    // share the material.
    MaterialLayer concrete{0.12, 1.75, 2300.0, 920.0};
    MaterialLayer slab_concrete{0.30, 1.75, 2300.0, 920.0};

    ConvectionModel constant5;  // defaults: constant 5 W/m²K
    ConvectionModel nonlinear;
    nonlinear.kind = ConvectionKind::Nonlinear;

    Zone ground;
    ground.name = "ground";
    ground.volume = 6.0 * 6.0 * 3.0;
    ground.convection = constant5;
    ground.initial_temperature = 25.0;
    ground.initial_humidity = 0.015;
    ground.reference_height = 0.0;

    Zone east = ground;
    east.name = "east";
    east.volume = 3.0 * 6.0 * 3.0;
    east.reference_height = 3.0;

    Zone west = east;
    west.name = "west";
    west.convection = nonlinear;  // the zone of interest gets the detailed model

    b.zones = {ground, east, west};

    auto wall = [&](const std::string& name, double area, const MaterialLayer& mat,
                    double tilt_deg, double azimuth_deg, bool ground_contact = false) {
        Wall w;
        w.name = name;
        w.area = area;
        w.layer = mat;
        w.tilt = deg2rad(tilt_deg);
        w.azimuth = deg2rad(azimuth_deg);
        w.ground_contact = ground_contact;
        return w;
    };

    auto glazing = [&](const std::string& name, double azimuth_deg) {
        Glazing g;
        g.name = name;
        g.area = 4.0;
        g.beam_transmittance = 0.85;
        g.diffuse_transmittance = 0.75;
        g.u_value = 5.8;
        g.tilt = deg2rad(90.0);
        g.azimuth = deg2rad(azimuth_deg);
        return g;
    };

    // Ground floor envelope: four 18 m² façades plus the slab on grade.
    b.interzones.push_back({"ground", kExterior, {wall("gf-south", 18.0, concrete, 90, 180)}});
    b.interzones.push_back({"ground", kExterior, {wall("gf-north", 18.0, concrete, 90, 0)}});
    b.interzones.push_back({"ground", kExterior, {wall("gf-east", 18.0, concrete, 90, 90)}});
    b.interzones.push_back({"ground", kExterior, {wall("gf-west", 18.0, concrete, 90, 270)}});
    b.interzones.push_back(
        {"ground", kExterior, {wall("slab", 36.0, slab_concrete, 180, 0, true)}});

    // A low crack in the south façade keeps the pressure network tied to
    // outdoor air.
    {
        Opening crack;
        crack.name = "gf-crack";
        crack.flow_coefficient = 0.02;
        crack.flow_exponent = 0.65;
        crack.height = 0.5;
        b.interzones[0].components.push_back(crack);
    }

    // Eastern first floor: 9 m² gables, glazed 18 m² east façade (14 m² wall +
    // 4 m² bay), half roof, and the floor slab over the ground zone.
    b.interzones.push_back({"east", kExterior, {wall("ef-south", 9.0, concrete, 90, 180)}});
    b.interzones.push_back({"east", kExterior, {wall("ef-north", 9.0, concrete, 90, 0)}});
    b.interzones.push_back(
        {"east", kExterior, {wall("ef-east", 14.0, concrete, 90, 90), glazing("ef-bay", 90)}});
    b.interzones.push_back({"east", kExterior, {wall("ef-roof", 18.0, concrete, 0, 0)}});
    b.interzones.push_back({"east", "ground", {wall("ef-floor", 18.0, concrete, 180, 0)}});

    // Western first floor, mirrored, with the air conditioner attached to the
    // glazed façade's interzone.
    b.interzones.push_back({"west", kExterior, {wall("wf-south", 9.0, concrete, 90, 180)}});
    b.interzones.push_back({"west", kExterior, {wall("wf-north", 9.0, concrete, 90, 0)}});
    {
        HvacSystem ac;
        ac.name = "wf-ac";
        ac.setpoint_low = 10.0;   // heating never called for at this site
        ac.setpoint_high = 20.0;  // cooling threshold the study tracks
        ac.schedule.fill(1);  // conditioned around the clock
        ac.heating_power_max = 0.0;
        ac.cooling_power_max = 2000.0;  // the under-sized equipment case
        ac.radiative_fraction = 0.0;
        b.interzones.push_back(
            {"west", kExterior,
             {wall("wf-west", 14.0, concrete, 90, 270), glazing("wf-bay", 270), ac}});
    }
    b.interzones.push_back({"west", kExterior, {wall("wf-roof", 18.0, concrete, 0, 0)}});
    b.interzones.push_back({"west", "ground", {wall("wf-floor", 18.0, concrete, 180, 0)}});

    // East/west partition on the first floor.
    b.interzones.push_back({"east", "west", {wall("partition", 18.0, concrete, 90, 270)}});

    // Stairwells through the intermediate floors. The eastern one is an open
    // stair modeled as a tall two-way opening spanning the upper part of the
    // ground-floor column; the western one sits behind a door and reduces to
    // a power-law crack.
    {
        Opening stair;
        stair.name = "ef-stair";
        stair.flow_coefficient = 0.01;
        stair.flow_exponent = 0.5;
        stair.height = -2.0;  // bottom 2 m below the upper zone's floor
        stair.large_opening = LargeOpeningGeometry{2.0, 1.0, 0.61};
        b.interzones[9].components.push_back(stair);  // east floor interzone

        Opening door;
        door.name = "wf-stair";
        door.flow_coefficient = 0.02;
        door.flow_exponent = 0.65;
        door.height = -1.0;
        b.interzones[14].components.push_back(door);  // west floor interzone
    }

    return b;
}

}  // namespace zonal
