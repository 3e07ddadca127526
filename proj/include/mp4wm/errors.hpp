#ifndef MP4WM_ERRORS_HPP
#define MP4WM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mp4wm {

/// Invalid user input: bad configuration text or out-of-range physical
/// parameters. The CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical or guard failure during propagation and measurement
/// (aliasing, wrap-around, failed fits). The CLI maps it to exit status 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mp4wm

#endif
