#pragma once

#include "kclose/closeness.hpp"
#include "kclose/cyclic_algebra.hpp"
#include "kclose/cyclotomic.hpp"
#include "kclose/epsilon.hpp"
#include "kclose/gld.hpp"
#include "kclose/hecke.hpp"
#include "kclose/hensel.hpp"
#include "kclose/local_field.hpp"
#include "kclose/proximity.hpp"
#include "kclose/suites.hpp"
#include "kclose/transfer.hpp"
#include "kclose/version.hpp"
