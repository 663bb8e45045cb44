// SPDX-License-Identifier: Apache-2.0
#include "msgate/engine/shots.hpp"
#include "msgate/engine/exact.hpp"
int main() { return 0; }
