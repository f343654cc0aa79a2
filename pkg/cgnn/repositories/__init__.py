from cgnn.repositories.bundle_repository import BundleRepository, DatasetBundle

__all__ = [
    "BundleRepository",
    "DatasetBundle",
]
