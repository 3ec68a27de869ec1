#include "ugrid/parallel.hpp"

namespace ugrid {

Executor::Executor(unsigned workers, std::size_t min_grain)
    : workers_(workers), min_grain_(std::max<std::size_t>(1, min_grain)) {
  if (workers_ == 0) workers_ = std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace ugrid
