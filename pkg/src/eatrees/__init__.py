"""Exotic aromatic trees and their elementary differentials."""
