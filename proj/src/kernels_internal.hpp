#pragma once

#include "cfa/kernels.hpp"

namespace cfa::kernels::detail {

extern const KernelTable kScalarTable;
#ifdef CFA_HAVE_AVX2
extern const KernelTable kAvx2Table;
#endif

}  // namespace cfa::kernels::detail
