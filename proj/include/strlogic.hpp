#ifndef STRLOGIC_HPP
#define STRLOGIC_HPP

#include "strlogic/error.hpp"
#include "strlogic/alphabet.hpp"
#include "strlogic/formula.hpp"
#include "strlogic/parser.hpp"
#include "strlogic/relativize.hpp"
#include "strlogic/semantics.hpp"
#include "strlogic/grammar.hpp"
#include "strlogic/groupoid.hpp"
#include "strlogic/languages.hpp"
#include "strlogic/automata.hpp"
#include "strlogic/rank_type.hpp"
#include "strlogic/transducer.hpp"
#include "strlogic/constructions.hpp"
#include "strlogic/nivat.hpp"
#include "strlogic/witnesses.hpp"

#endif // STRLOGIC_HPP
