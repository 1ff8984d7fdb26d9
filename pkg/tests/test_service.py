import json
import threading

import pytest
from fastapi.testclient import TestClient

from sokoevo import engine
from sokoevo.domain import DesignSpec
from sokoevo.problem import SokobanProblem
from sokoevo.service import create_app

SMALL = {
    "width": 6,
    "height": 6,
    "max_boxes": 2,
    "generations": 10,
    "offspring_per_generation": 10,
    "seed": 0,
}


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


def make_session(client, **overrides):
    body = dict(SMALL, **overrides)
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 201, resp.text
    return resp.json()


class TestCreateSession:
    def test_default_session(self, client):
        snap = make_session(client)
        assert snap["generation"] == 0
        assert snap["ca"] and snap["da"]
        assert snap["status"] == "Idle"

    def test_width_validation_names_field(self, client):
        resp = client.post("/sessions", json=dict(SMALL, width=2))
        assert resp.status_code == 422
        assert any("width" in str(item.get("loc")) for item in resp.json()["detail"])

    def test_area_cap(self, client):
        resp = client.post("/sessions", json=dict(SMALL, width=30, height=30))
        assert resp.status_code == 422

    def test_same_seed_identical_snapshots_distinct_ids(self, client):
        a = make_session(client)
        b = make_session(client)
        assert a["session_id"] != b["session_id"]
        assert a["ca"] == b["ca"]
        assert a["da"] == b["da"]

    def test_unknown_key_rejected(self, client):
        resp = client.post("/sessions", json=dict(SMALL, bogus=1))
        assert resp.status_code == 422


class TestStepSession:
    def test_single_step(self, client):
        sid = make_session(client)["session_id"]
        resp = client.post(f"/sessions/{sid}/step", json={"k": 1})
        assert resp.status_code == 200
        records = resp.json()["records"]
        assert len(records) == 1
        assert records[0]["generation"] == 1

    def test_batch_of_five(self, client):
        sid = make_session(client)["session_id"]
        records = client.post(f"/sessions/{sid}/step", json={"k": 5}).json()["records"]
        assert [r["generation"] for r in records] == [1, 2, 3, 4, 5]

    def test_unknown_session(self, client):
        assert client.post("/sessions/nope/step", json={"k": 1}).status_code == 404

    def test_done_at_generation_cap(self, client):
        sid = make_session(client, generations=2)["session_id"]
        resp = client.post(f"/sessions/{sid}/step", json={"k": 10})
        assert len(resp.json()["records"]) == 2
        assert resp.json()["status"] == "Done"

    def test_matches_headless_run(self, client):
        sid = make_session(client)["session_id"]
        stepped = []
        for _ in range(SMALL["generations"]):
            stepped.extend(client.post(f"/sessions/{sid}/step", json={"k": 1}).json()["records"])
        problem = SokobanProblem(spec=DesignSpec(width=6, height=6, max_boxes=2))
        config = engine.EngineConfig(generations=10, offspring_per_generation=10)
        headless = engine.run(config, problem, seed=0)
        assert stepped == [json.loads(r.to_json()) for r in headless.records[1:]]


class TestGetState:
    def test_fresh_history_length_one(self, client):
        sid = make_session(client)["session_id"]
        state = client.get(f"/sessions/{sid}/state").json()
        assert len(state["history"]) == 1

    def test_history_appends_per_step(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/sessions/{sid}/step", json={"k": 3})
        state = client.get(f"/sessions/{sid}/state").json()
        assert len(state["history"]) == 4
        assert state["generation"] == 3

    def test_unknown_session(self, client):
        assert client.get("/sessions/nope/state").status_code == 404


class TestGetLevel:
    def test_payload_matches_snapshot(self, client):
        snap = make_session(client)
        sid = snap["session_id"]
        member = snap["da"][0]
        payload = client.get(f"/sessions/{sid}/levels/{member['id']}").json()
        assert [payload["f_emp"], payload["f_div"]] == member["objectives"]
        assert "#" in payload["level"]

    def test_solution_replays_to_win(self, client):
        snap = make_session(client)
        sid = snap["session_id"]
        for member in snap["da"]:
            payload = client.get(f"/sessions/{sid}/levels/{member['id']}").json()
            result = client.post(
                f"/sessions/{sid}/play",
                json={"member": member["id"], "moves": payload["solution"]},
            ).json()
            assert result["won"] is True
            assert result["rejected_moves"] == []

    def test_unknown_member(self, client):
        sid = make_session(client)["session_id"]
        assert client.get(f"/sessions/{sid}/levels/999999").status_code == 404


class TestPlay:
    def test_invalid_move_string(self, client):
        snap = make_session(client)
        sid = snap["session_id"]
        member = snap["da"][0]["id"]
        resp = client.post(f"/sessions/{sid}/play", json={"member": member, "moves": "RX"})
        assert resp.status_code == 422

    def test_empty_moves(self, client):
        snap = make_session(client)
        sid = snap["session_id"]
        member = snap["da"][0]["id"]
        resp = client.post(f"/sessions/{sid}/play", json={"member": member, "moves": ""})
        assert resp.status_code == 200


class TestDeleteSession:
    def test_lifecycle(self, client):
        sid = make_session(client)["session_id"]
        assert client.delete(f"/sessions/{sid}").status_code == 200
        assert client.get(f"/sessions/{sid}/state").status_code == 404

    def test_idempotent(self, client):
        assert client.delete("/sessions/unknown").status_code == 200
        sid = make_session(client)["session_id"]
        client.delete(f"/sessions/{sid}")
        assert client.delete(f"/sessions/{sid}").status_code == 200


@pytest.fixture()
def live_server():
    import socket
    import time

    import uvicorn

    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    server = uvicorn.Server(
        uvicorn.Config(create_app(), host="127.0.0.1", port=port, log_level="warning")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("uvicorn did not start")
        time.sleep(0.02)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


class TestBusy:
    def test_concurrent_step_rejected(self, live_server):
        import time

        import httpx

        body = dict(SMALL, width=8, height=8, max_boxes=3, generations=200)
        sid = httpx.post(f"{live_server}/sessions", json=body, timeout=60).json()["session_id"]
        codes = []

        def long_step():
            codes.append(
                httpx.post(
                    f"{live_server}/sessions/{sid}/step", json={"k": 100}, timeout=120
                ).status_code
            )

        thread = threading.Thread(target=long_step)
        thread.start()
        time.sleep(0.3)
        second = httpx.post(f"{live_server}/sessions/{sid}/step", json={"k": 1}, timeout=120)
        thread.join()
        assert codes == [200]
        assert second.status_code == 409


class TestEvents:
    def test_stream_matches_step_records(self, live_server):
        import time

        import httpx

        resp = httpx.post(f"{live_server}/sessions", json=SMALL)
        assert resp.status_code == 201
        sid = resp.json()["session_id"]
        received = []

        def consume():
            with httpx.stream(
                "GET", f"{live_server}/sessions/{sid}/events", timeout=20
            ) as stream:
                for line in stream.iter_lines():
                    if line.startswith("data: "):
                        received.append(line[len("data: "):])
                        if len(received) == 3:
                            return

        thread = threading.Thread(target=consume, daemon=True)
        thread.start()
        time.sleep(0.3)
        body = httpx.post(f"{live_server}/sessions/{sid}/step", json={"k": 3}, timeout=60)
        thread.join(timeout=15)
        raw = body.text
        records_json = json.loads(raw)["records"]
        assert len(received) == 3
        assert [json.loads(r) for r in received] == records_json
        # Byte-for-byte: the response body embeds exactly the streamed strings.
        for chunk in received:
            assert chunk in raw
