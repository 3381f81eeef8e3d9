#pragma once

#include "dicke/error.hpp"
#include "dicke/model.hpp"
#include "dicke/critical_coupling.hpp"
#include "dicke/version.hpp"

#include "dicke/classical/critical_points.hpp"
#include "dicke/classical/dopri5.hpp"
#include "dicke/classical/flow.hpp"
#include "dicke/classical/lyapunov.hpp"
#include "dicke/classical/phase_space.hpp"
#include "dicke/classical/poincare.hpp"
#include "dicke/classical/sampling.hpp"
#include "dicke/classical/wells.hpp"

#include "dicke/quantum/basis.hpp"
#include "dicke/quantum/coherent_state.hpp"
#include "dicke/quantum/operators.hpp"
#include "dicke/quantum/spectrum.hpp"
#include "dicke/quantum/truncation.hpp"

#include "dicke/observables/band.hpp"
#include "dicke/observables/constants.hpp"
#include "dicke/observables/diagonal.hpp"
#include "dicke/observables/dispersion.hpp"
#include "dicke/observables/peres.hpp"
#include "dicke/observables/sectors.hpp"
#include "dicke/observables/wells.hpp"
