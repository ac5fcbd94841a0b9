#pragma once

#include "zonal/airflow.hpp"
#include "zonal/building.hpp"
#include "zonal/building_json.hpp"
#include "zonal/case_study.hpp"
#include "zonal/datetime.hpp"
#include "zonal/engine.hpp"
#include "zonal/errors.hpp"
#include "zonal/hvac.hpp"
#include "zonal/moisture.hpp"
#include "zonal/runtime.hpp"
#include "zonal/solar.hpp"
#include "zonal/thermal.hpp"
#include "zonal/weather.hpp"
#include "zonal/zone_system.hpp"
