#pragma once

#include <stdexcept>
#include <string>

namespace smr {

// Every library failure derives from Error. category() is a stable,
// machine-parsable token the CLI prints on its error line.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

#define SMR_DEFINE_ERROR(Name, token)                                  \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(token, what) {}     \
  };

SMR_DEFINE_ERROR(IoError, "io")
SMR_DEFINE_ERROR(FormatError, "format")
SMR_DEFINE_ERROR(RangeError, "range")
SMR_DEFINE_ERROR(ShapeError, "shape")
SMR_DEFINE_ERROR(DataError, "data")
SMR_DEFINE_ERROR(NumericsError, "numerics")
SMR_DEFINE_ERROR(CoverageError, "coverage")
SMR_DEFINE_ERROR(SpecError, "spec")
SMR_DEFINE_ERROR(ConfigError, "config")

#undef SMR_DEFINE_ERROR

}  // namespace smr
