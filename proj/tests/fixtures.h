#pragma once

// MoDeS3 railway fixtures shared by the test binaries.

#include <random>
#include <string>

#include "wcetw/io.h"
#include "wcetw/logic.h"
#include "wcetw/model.h"
#include "wcetw/theory.h"

namespace wcetw::fixture {

std::string data_path(const std::string& relative);

const model::Metamodel& modes3();
const model::SignaturePtr& modes3_signature();

// Metamodel-derived rules plus the hand-written typing rules, all pinned to 0.
const model::WellFormedness& modes3_wellformedness();

model::PartialModel load_model(const std::string& name);

logic::Predicate close_trains();
logic::Predicate train_count();         // Train(v1)
logic::Predicate asymmetric_connected();

// Train count to x1, asymmetric connections to x2.
model::Theory example_theory();

}  // namespace wcetw::fixture

namespace wcetw::fixture {

// Concrete railway satisfying every well-formedness rule: a symmetric track
// of degree at most two, turnouts drawn from the segments, and each train on
// at most one segment.
model::PartialModel random_railway(std::mt19937_64& rng, int segments, int turnouts, int trains);

}  // namespace wcetw::fixture

#include "wcetw/witness.h"

namespace wcetw::fixture {

// Three segments in a directed line, a multi-object of trains, at most two
// trains; counts trains to x1 and close trains to x2, maximizes 250 * x2.
// Metamodel rules are pinned to zero.
witness::WitnessTask placement_task();

}  // namespace wcetw::fixture
