#pragma once

#include "nanophrase/error.hpp"
#include "nanophrase/fixtures.hpp"
#include "nanophrase/forest.hpp"
#include "nanophrase/fuzz.hpp"
#include "nanophrase/invariants.hpp"
#include "nanophrase/linking.hpp"
#include "nanophrase/moves.hpp"
#include "nanophrase/phrase.hpp"
#include "nanophrase/random_phrase.hpp"
#include "nanophrase/series.hpp"
#include "nanophrase/signed_word.hpp"
#include "nanophrase/symbols.hpp"
#include "nanophrase/text.hpp"
#include "nanophrase/walk.hpp"
