#pragma once

#include "brionlab/bessel.hpp"
#include "brionlab/geometry.hpp"
#include "brionlab/io.hpp"
#include "brionlab/nullset.hpp"
#include "brionlab/transform.hpp"
#include "brionlab/trigpoly.hpp"
#include "brionlab/types.hpp"
