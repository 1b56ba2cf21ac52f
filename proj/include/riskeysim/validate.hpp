#pragma once

#include <ostream>

namespace riskeysim {

// Fast invariant battery behind `riskeysim validate`: spot checks of the
// samplers, quantizer, sparse recovery, optimizer, theory bounds and the
// thread-count independence of a small figure run. Prints one line per
// check; returns false if any fails.
bool run_validation(std::ostream& os);

}  // namespace riskeysim
