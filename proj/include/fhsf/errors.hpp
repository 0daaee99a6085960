#ifndef FHSF_ERRORS_HPP
#define FHSF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fhsf {

// Error classes; each maps to a distinct CLI exit code via int(code).
enum class errc {
  bad_magic = 2,           // not a P6 file
  bad_header = 3,          // unparsable or out-of-range header fields
  bad_maxval = 4,          // maxval other than 255
  truncated = 5,           // payload shorter than 3*w*h
  io_failure = 6,          // open/read/write failed
  dimension_mismatch = 7,  // image pair sizes differ
  bad_argument = 8,        // invalid parameter value
  bad_config = 9,          // config file rejected (parse or singular matrix)
  degenerate_input = 10,   // e.g. all-black NCD reference
};

class error : public std::runtime_error {
 public:
  error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace fhsf

#endif
