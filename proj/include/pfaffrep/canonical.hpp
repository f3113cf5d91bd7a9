/*
 * Copyright 2026 The pfaffrep Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "pfaffrep/pencil.hpp"

namespace pfaffrep {

struct CanonicalReport {
  std::vector<Complex> roots;  // sorted by (real, imag)
  Matrix basis_change;         // B with pencil = B A B^t
  SkewPencil pencil;
  double residual = 0.0;  // relative deviation from the block form
};

struct StructureReport {
  bool is_decomposable_form = false;
  bool is_symmetric_blocks = false;
  int free_parameter_count = 0;
};

/// Block-diagonal form: A1 blocks [[0,1],[-1,0]], A2 blocks
/// [[0,-p_i],[p_i,0]] where p_i are the roots of Pf(0, t, 1).
///
/// Requires d distinct roots on x0 = 0 (RepeatedRoots, NonGenericLine);
/// throws SpanFailure when the kernels do not span the whole space.
CanonicalReport to_canonical(const SkewPencil& p, const Tolerances& tol, std::uint64_t seed = 0);

/// Relative deviation of A1, A2 from the block form with the given roots.
double canonical_residual(const SkewPencil& p, const std::vector<Complex>& roots);

/// Reads the roots off a pencil in block form; throws NotInCanonicalForm.
std::vector<Complex> canonical_roots(const SkewPencil& p, const Tolerances& tol);

/// Q with rows e_{2r} - e_{2r+1} (r < d) followed by e_{2r+1}.
Matrix second_canonical_Q(int d);

/// Q A Q^t: A1 = [[0,Id],[-Id,0]], A2 = [[0,-D],[D,0]] with D = diag(p_i).
SkewPencil to_second_canonical(const SkewPencil& p, const Tolerances& tol);

/// Congruence by diag(R_1, ..., R_d) with det R_i = 1 (NotUnimodular).
SkewPencil gauge_action(const SkewPencil& p, const std::vector<Matrix>& blocks, const Tolerances& tol);

/// 3/2 d (d - 3) for d >= 3, zero below.
int free_parameter_count(int d);

/// Max modulus of the A0 entries that must vanish for a decomposable
/// second canonical form (strict upper triangles of the diagonal blocks).
double off_pattern_norm(const SkewPencil& p);

/// Pattern checks on a second canonical form; throws NotInCanonicalForm.
StructureReport structure_report(const SkewPencil& p, const Tolerances& tol);

}  // namespace pfaffrep
