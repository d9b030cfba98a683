#pragma once

#include "geolab/circle.hpp"
#include "geolab/connect.hpp"
#include "geolab/domains.hpp"
#include "geolab/error.hpp"
#include "geolab/fft.hpp"
#include "geolab/geodesic.hpp"
#include "geolab/h_class.hpp"
#include "geolab/io.hpp"
#include "geolab/parallel.hpp"
#include "geolab/semitube.hpp"
#include "geolab/svg.hpp"
