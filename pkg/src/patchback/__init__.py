"""patchback: floor-patch backdoor attacks against safety-filtered navigation policies, at desk scale."""

__version__ = "0.1.0"
