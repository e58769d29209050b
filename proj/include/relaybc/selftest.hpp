// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RELAYBC_SELFTEST_HPP
#define RELAYBC_SELFTEST_HPP

#include <ostream>

namespace relaybc {

// Fast invariant battery (a few seconds). Prints one PASS/FAIL line per
// check and returns the number of failures.
int run_selftest(std::ostream& os);

}  // namespace relaybc

#endif  // RELAYBC_SELFTEST_HPP
