#include "trudlab/field.hpp"

#include <algorithm>

namespace trudlab {

double SpaceTimeField::sup_at(std::size_t j) const {
    return *std::max_element(values.at(j).begin(), values.at(j).end());
}

double SpaceTimeField::inf_at(std::size_t j) const {
    return *std::min_element(values.at(j).begin(), values.at(j).end());
}

}  // namespace trudlab
