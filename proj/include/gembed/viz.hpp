#pragma once

#include "gembed/matrix.hpp"

namespace gembed {

/// Top-2 principal components of the centered embedding. Columns are
/// orthogonal; each column's largest-magnitude loading is positive.
DenseMatrix pca_project_2d(const DenseMatrix& Y);

}  // namespace gembed
