#pragma once

namespace phc {

/// Worker count for internal loops: PHC_LAB_THREADS when set (>= 1), otherwise the
/// hardware concurrency. Never less than 1.
int worker_count();

}  // namespace phc
