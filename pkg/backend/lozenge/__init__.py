from .chains import Corner, Lozenge, LozengeChain, ScallopKind, chain_along_path, is_scalloped, is_string
from .fat_tree import (FatTreeEdge, FatTreePatch, FatTreeVertex, LozengeError, build_fat_tree,
                       deck_translate, export_fat_tree, reduce_word, sector_labels, vertex_name)
from .skew_model import (Connection, Leaf, SkewConnection, SkewOrbit, bfs_chain_length,
                         closed_form_connection, eta, lozenge_corners, nu, parse_orbit,
                         skew_chain_connected, skew_partner, skew_partner_inverse, tau_s, tau_u)

__all__ = [
    'Corner', 'Lozenge', 'LozengeChain', 'ScallopKind', 'chain_along_path', 'is_scalloped', 'is_string',
    'FatTreeEdge', 'FatTreePatch', 'FatTreeVertex', 'LozengeError', 'build_fat_tree', 'deck_translate',
    'export_fat_tree', 'reduce_word', 'sector_labels', 'vertex_name',
    'Connection', 'Leaf', 'SkewConnection', 'SkewOrbit', 'bfs_chain_length', 'closed_form_connection', 'eta',
    'lozenge_corners', 'nu', 'parse_orbit', 'skew_chain_connected', 'skew_partner', 'skew_partner_inverse',
    'tau_s', 'tau_u',
]
