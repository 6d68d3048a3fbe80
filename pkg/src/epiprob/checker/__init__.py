"""Model-checking engines."""
from .ctl import (CTLChecker, PointSpec, eval_point, eval_prob_term, failing_initial_states, model_check,
                  prop5_equivalence)
from .semidecide import (check_mixed_time, check_skolem_form, decide_qualitative, mixed_time_of, prop_mass,
                         skolem_form_of)
from .simulate import simulate_runs
from .verdict import Fails, Holds, NoWitnessUpTo, Witness, describe, exit_code
from .wmlo import WMLOEvaluator, eval_wmlo
