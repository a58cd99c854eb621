#pragma once

#include "clique.hpp"
#include "colouring.hpp"
#include "discharge.hpp"
#include "errors.hpp"
#include "families.hpp"
#include "graph.hpp"
#include "hardcore.hpp"
#include "io.hpp"
#include "kahn.hpp"
#include "lists.hpp"
#include "matching_instance.hpp"
#include "pipeline.hpp"
#include "polytope.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "reduction.hpp"
#include "sigma_system.hpp"
