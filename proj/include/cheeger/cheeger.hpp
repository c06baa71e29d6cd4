#pragma once

#include "cheeger/error.hpp"
#include "cheeger/vertex_set.hpp"
#include "cheeger/kernel.hpp"
#include "cheeger/kernel_io.hpp"
#include "cheeger/setops.hpp"
#include "cheeger/spectra.hpp"
#include "cheeger/step_function.hpp"
#include "cheeger/evolving.hpp"
#include "cheeger/shape.hpp"
#include "cheeger/bound_entry.hpp"
#include "cheeger/congestion.hpp"
#include "cheeger/expansion.hpp"
#include "cheeger/bounds.hpp"
#include "cheeger/chains.hpp"
#include "cheeger/verify.hpp"
