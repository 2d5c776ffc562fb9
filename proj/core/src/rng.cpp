#include "revclt/rng.hpp"

// header-only; this TU anchors the target
