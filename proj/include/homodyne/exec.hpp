#pragma once

namespace homodyne {

// Serial kernels are the reference implementation; Parallel uses OpenMP.
enum class Exec { Serial, Parallel };

void set_num_threads(int n);
int max_threads();

}  // namespace homodyne
