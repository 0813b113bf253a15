#pragma once

#include "ctaparse/error.hpp"
#include "ctaparse/terms.hpp"
#include "ctaparse/word_tuple.hpp"
#include "ctaparse/automaton.hpp"
#include "ctaparse/algebras.hpp"
#include "ctaparse/construction.hpp"
#include "ctaparse/parser.hpp"
#include "ctaparse/oracle.hpp"
#include "ctaparse/io.hpp"
