import numpy as np
import pytest
from fastapi.testclient import TestClient

from terrasuite.envs import make_env
from terrasuite.policies import RandomPolicy
from terrasuite.service.app import create_app


@pytest.fixture
def client():
    return TestClient(create_app())


def _open_session(client, env_name="PD_Biped2D_Walk-Flat-v0", seed=None):
    body = {"env_name": env_name}
    if seed is not None:
        body["seed"] = seed
    r = client.post("/sessions", json=body)
    assert r.status_code == 200, r.text
    return r.json()


class TestCatalogRoutes:
    def test_health(self, client):
        r = client.get("/health")
        assert r.status_code == 200
        assert r.json()["status"] == "ok"

    def test_envs_count(self, client):
        r = client.get("/envs")
        assert r.status_code == 200
        body = r.json()
        assert body["count"] >= 89
        assert len(body["envs"]) == body["count"]

    def test_envs_filter(self, client):
        r = client.get("/envs", params={"filter": "Raptor"})
        assert all("Raptor" in e["name"] for e in r.json()["envs"])

    def test_unknown_env_404_with_suggestions(self, client):
        r = client.post("/sessions", json={"env_name": "PD_Biped2D_Walk-Mxed-v0"})
        assert r.status_code == 404
        detail = r.json()["detail"]
        assert detail["code"] == "catalog_miss"
        assert "PD_Biped2D_Walk-Mixed-v0" in detail["suggestions"]


class TestSessionLifecycle:
    def test_create_reset_step_close(self, client):
        s = _open_session(client, seed=7)
        sid = s["session_id"]
        assert s["obs_dim"] == 79 and s["terrain_len"] == 50

        r = client.post(f"/sessions/{sid}/reset")
        assert r.status_code == 200
        obs = r.json()["observation"]
        assert len(obs) == 79

        r = client.post(f"/sessions/{sid}/step", json={"action": [0.0] * s["act_dim"]})
        assert r.status_code == 200
        body = r.json()
        assert len(body["observation"]) == 79
        assert 0.0 <= body["reward"] <= 1.0
        assert isinstance(body["done"], bool)
        assert "root_x" in body["info"]

        assert client.delete(f"/sessions/{sid}").status_code == 200
        assert client.get("/sessions").json()["open_sessions"] == 0

    def test_spaces(self, client):
        s = _open_session(client)
        r = client.get(f"/sessions/{s['session_id']}/spaces")
        assert r.status_code == 200
        body = r.json()
        assert len(body["action_min"]) == s["act_dim"]
        assert len(body["observation_max"]) == s["obs_dim"]
        assert all(v == 5.0 for v in body["observation_max"][: s["terrain_len"]])

    def test_step_before_reset_409(self, client):
        s = _open_session(client)
        r = client.post(f"/sessions/{s['session_id']}/step",
                        json={"action": [0.0] * s["act_dim"]})
        assert r.status_code == 409
        assert r.json()["detail"]["code"] == "not_reset"

    def test_step_after_done_409(self, client):
        s = _open_session(client, env_name="Torque_Biped2D_Walk-Flat-v0", seed=1)
        sid = s["session_id"]
        client.post(f"/sessions/{sid}/reset")
        zeros = [0.0] * s["act_dim"]
        for _ in range(200):  # passive biped falls long before this
            body = client.post(f"/sessions/{sid}/step", json={"action": zeros}).json()
            if body["done"]:
                break
        else:
            pytest.fail("episode never finished")
        r = client.post(f"/sessions/{sid}/step", json={"action": zeros})
        assert r.status_code == 409
        assert r.json()["detail"]["code"] == "episode_finished"

    def test_dimension_mismatch_400(self, client):
        s = _open_session(client, seed=2)
        sid = s["session_id"]
        client.post(f"/sessions/{sid}/reset")
        r = client.post(f"/sessions/{sid}/step", json={"action": [0.0]})
        assert r.status_code == 400
        assert r.json()["detail"]["code"] == "bad_request"

    def test_unknown_session_404(self, client):
        assert client.post("/sessions/s999/reset").status_code == 404
        assert client.delete("/sessions/s999").status_code == 404
        assert client.delete("/sessions/s999").json()["detail"]["code"] == "session_not_found"

    def test_seed_endpoint_matches_in_process(self, client):
        env_name = "PD_Biped2D_Walk-Mixed-v0"
        s = _open_session(client, env_name=env_name)
        sid = s["session_id"]
        client.post(f"/sessions/{sid}/seed", json={"seed": 1234})
        remote_obs = client.post(f"/sessions/{sid}/reset").json()["observation"]

        env = make_env(env_name)
        env.set_random_seed(1234)
        local_obs = env.reset().data
        assert remote_obs == [float(v) for v in local_obs]

    def test_rewards_match_in_process(self, client):
        env_name = "Muscle_Hopper2D_Walk-Gaps-v0"
        s = _open_session(client, env_name=env_name, seed=77)
        sid = s["session_id"]
        client.post(f"/sessions/{sid}/reset")

        env = make_env(env_name)
        env.set_random_seed(77)
        env.reset()
        policy = RandomPolicy(4)
        for _ in range(20):
            action = policy(env)
            local = env.step(action)
            remote = client.post(f"/sessions/{sid}/step",
                                 json={"action": [float(a) for a in action]}).json()
            assert remote["reward"] == local.reward
            assert remote["done"] == local.done
            assert remote["observation"] == [float(v) for v in local.observation.data]
            if local.done:
                env.reset()
                client.post(f"/sessions/{sid}/reset")

    def test_many_create_close_cycles(self, client):
        for _ in range(50):
            s = _open_session(client)
            assert client.delete(f"/sessions/{s['session_id']}").status_code == 200
        assert client.get("/sessions").json()["open_sessions"] == 0
