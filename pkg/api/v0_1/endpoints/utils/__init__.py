from .server import convert_tree_to_dict, domain_errors, to_treelib
