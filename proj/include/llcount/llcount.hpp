#pragma once

#include "llcount/cluster.hpp"
#include "llcount/errors.hpp"
#include "llcount/events.hpp"
#include "llcount/graph.hpp"
#include "llcount/hypothesis.hpp"
#include "llcount/oracle.hpp"
#include "llcount/parallel.hpp"
#include "llcount/projector.hpp"
#include "llcount/qsat.hpp"
#include "llcount/ursell.hpp"
