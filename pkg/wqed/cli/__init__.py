from .sweep import sweep
from .ep import ep
from .verify import verify
from .asymptotes import asymptotes
from .chiral import chiral

commands = {
    "sweep": sweep,
    "ep": ep,
    "verify": verify,
    "asymptotes": asymptotes,
    "chiral": chiral,
}
