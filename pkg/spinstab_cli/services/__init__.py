# Servicios de la CLI: caché de representaciones y campañas
from spinstab_cli.services.rep_cache import RepresentationCache, get_rep_cache, reset_rep_cache
from spinstab_cli.services.campaign_service import CampaignService, RunHistory, build_manifest

__all__ = [
    "RepresentationCache",
    "get_rep_cache",
    "reset_rep_cache",
    "CampaignService",
    "RunHistory",
    "build_manifest",
]
