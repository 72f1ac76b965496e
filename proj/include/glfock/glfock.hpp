#pragma once

#include "glfock/errors.hpp"
#include "glfock/quadrature.hpp"
#include "glfock/random.hpp"
#include "glfock/special_functions.hpp"
#include "glfock/phi_descriptor.hpp"
#include "glfock/gl_core.hpp"
#include "glfock/fock_space.hpp"
#include "glfock/bargmann.hpp"
#include "glfock/weierstrass.hpp"
#include "glfock/lattice_frames.hpp"
