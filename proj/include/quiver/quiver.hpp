#pragma once

// Umbrella header for the quiver embedded property-graph query engine.

#include "quiver/ast.hpp"
#include "quiver/bundle.hpp"
#include "quiver/error.hpp"
#include "quiver/exec.hpp"
#include "quiver/expr.hpp"
#include "quiver/lexer.hpp"
#include "quiver/matcher.hpp"
#include "quiver/parser.hpp"
#include "quiver/printer.hpp"
#include "quiver/session.hpp"
#include "quiver/store.hpp"
#include "quiver/table.hpp"
#include "quiver/value.hpp"
