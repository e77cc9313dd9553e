// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace umbrella {

/// Base of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define UMBRELLA_DEFINE_ERROR(Name)    \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

UMBRELLA_DEFINE_ERROR(MalformedId);        // not a datapath identifier
UMBRELLA_DEFINE_ERROR(MalformedValue);     // MAC / IPv4 / prefix text
UMBRELLA_DEFINE_ERROR(InvalidTopology);    // referential closure or uniqueness broken
UMBRELLA_DEFINE_ERROR(InvalidRule);
UMBRELLA_DEFINE_ERROR(InvalidSpec);
UMBRELLA_DEFINE_ERROR(InvalidMutation);
UMBRELLA_DEFINE_ERROR(InvalidTrain);
UMBRELLA_DEFINE_ERROR(ClockRegression);
UMBRELLA_DEFINE_ERROR(UnknownHost);
UMBRELLA_DEFINE_ERROR(DuplicateName);
UMBRELLA_DEFINE_ERROR(UnknownDriver);
UMBRELLA_DEFINE_ERROR(UnknownAlgorithm);
UMBRELLA_DEFINE_ERROR(AlgorithmContractViolation);
UMBRELLA_DEFINE_ERROR(ConfigError);
UMBRELLA_DEFINE_ERROR(InvalidPlan);

#undef UMBRELLA_DEFINE_ERROR

}  // namespace umbrella
