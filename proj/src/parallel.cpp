// SPDX-License-Identifier: Apache-2.0
#include <omp.h>

#include "adspec/types.hpp"

namespace adspec
{

void set_num_threads(int n)
{
  if (n > 0)
  {
    omp_set_num_threads(n);
  }
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace adspec
