#include "build.hpp"

namespace mbc::containers {

void build::unknown_feature(std::string_view type, std::string_view feature)
{
    throw contracts::UnknownFeature(std::string(type) + " has no feature '" + std::string(feature) + "'");
}

std::vector<std::string> fault_names()
{
    return {std::string(merge_right_missing_link)};
}

contracts::Registry standard_registry()
{
    contracts::Registry r;
    r.add(linked_list_spec());
    r.add(array_spec());
    r.add(table_spec());
    r.add(hash_table_spec());
    r.add(collection_spec());
    r.add(dispenser_spec());
    r.add(stack_spec());
    r.add(queue_spec());
    r.add(eq_set_spec());
    r.add(binary_tree_spec());
    return r;
}

}  // namespace mbc::containers
