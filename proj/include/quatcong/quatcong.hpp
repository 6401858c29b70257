#pragma once

#include "quatcong/error.hpp"
#include "quatcong/base_field.hpp"
#include "quatcong/numtheory.hpp"
#include "quatcong/fields.hpp"
#include "quatcong/quatalg.hpp"
#include "quatcong/congruence.hpp"
#include "quatcong/lefschetz.hpp"
#include "quatcong/bianchi.hpp"
#include "quatcong/oracle/rings.hpp"
#include "quatcong/oracle/cohomology.hpp"
