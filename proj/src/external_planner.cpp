#include "graspbench/external_planner.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstring>

#include <json.hpp>

#include "graspbench/io.hpp"

namespace graspbench {

std::string build_plan_request(const Observation& obs, const GripperSpec& gripper) {
    nlohmann::ordered_json req;
    req["type"] = "plan";
    req["width"] = obs.depth.width;
    req["height"] = obs.depth.height;
    req["fx"] = obs.camera.fx;
    req["fy"] = obs.camera.fy;
    req["cx"] = obs.camera.cx;
    req["cy"] = obs.camera.cy;
    req["standoff_m"] = obs.camera.standoff;
    req["max_opening_m"] = gripper.max_opening;
    req["depth_b64"] = depth_to_base64(obs.depth);
    return req.dump();
}

Grasp parse_plan_response(const std::string& line, const GripperSpec& gripper,
                          const ExternalPlannerOptions& options) {
    nlohmann::json resp;
    try {
        resp = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("unparseable response: ") + e.what());
    }
    if (!resp.is_object() || !resp.contains("type") || !resp["type"].is_string())
        throw ProtocolError("response missing type");
    std::string type = resp["type"];
    if (type == "error") {
        std::string msg = resp.value("message", "planner reported failure");
        throw RemoteFailure(msg);
    }
    if (type != "grasp") throw ProtocolError("unexpected response type '" + type + "'");

    auto number = [&](const char* key) -> double {
        if (!resp.contains(key) || !resp[key].is_number())
            throw ProtocolError(std::string("response missing numeric field '") + key + "'");
        return resp[key].get<double>();
    };
    Grasp g;
    g.center = {number("x_m"), number("y_m"), number("z_m")};
    g.angle = number("angle_rad");
    g.width = number("width_m");
    g.quality = number("quality");

    if (g.angle < 0.0 || g.angle >= kPi) {
        if (!options.allow_angle_normalization)
            throw ProtocolError("angle " + std::to_string(g.angle) + " outside [0, pi)");
        g.angle = normalize_grasp_angle(g.angle);
    }
    validate_grasp(g, gripper);
    return g;
}

namespace {

struct Pipe {
    int fds[2] = {-1, -1};
    Pipe() {
        if (pipe(fds) != 0) throw IoError("pipe() failed");
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    void close_read() {
        if (fds[0] >= 0) ::close(fds[0]);
        fds[0] = -1;
    }
    void close_write() {
        if (fds[1] >= 0) ::close(fds[1]);
        fds[1] = -1;
    }
};

void ignore_sigpipe_once() {
    static bool done = false;
    if (!done) {
        ::signal(SIGPIPE, SIG_IGN);
        done = true;
    }
}

}  // namespace

Grasp external_plan(const std::string& command, const Observation& obs,
                    const GripperSpec& gripper, const ExternalPlannerOptions& options) {
    ignore_sigpipe_once();
    std::string request = build_plan_request(obs, gripper) + "\n";

    Pipe to_child, from_child;
    pid_t pid = fork();
    if (pid < 0) throw IoError("fork() failed");
    if (pid == 0) {
        // own process group so the deadline kill reaches the whole command,
        // not just the /bin/sh wrapper
        setpgid(0, 0);
        dup2(to_child.fds[0], STDIN_FILENO);
        dup2(from_child.fds[1], STDOUT_FILENO);
        ::close(to_child.fds[0]);
        ::close(to_child.fds[1]);
        ::close(from_child.fds[0]);
        ::close(from_child.fds[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    setpgid(pid, pid);  // also from the parent side to avoid the startup race
    to_child.close_read();
    from_child.close_write();

    auto deadline =
        std::chrono::steady_clock::now() +
        std::chrono::milliseconds(static_cast<long>(options.timeout_seconds * 1000.0));
    auto remaining_ms = [&]() {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                        deadline - std::chrono::steady_clock::now())
                        .count();
        return left < 0 ? 0L : static_cast<long>(left);
    };
    auto fail = [&](auto&& make_error) -> Grasp {
        ::kill(-pid, SIGKILL);
        int status = 0;
        waitpid(pid, &status, 0);
        throw make_error();
    };

    // feed the request (the child may exit early; EPIPE is its business)
    size_t sent = 0;
    while (sent < request.size()) {
        ssize_t n = write(to_child.fds[1], request.data() + sent, request.size() - sent);
        if (n < 0) {
            if (errno == EPIPE) break;
            return fail([] { return IoError("write to planner failed"); });
        }
        sent += static_cast<size_t>(n);
    }
    to_child.close_write();

    std::string line;
    char buf[4096];
    bool got_line = false;
    while (!got_line) {
        struct pollfd pfd{from_child.fds[0], POLLIN, 0};
        int pr = poll(&pfd, 1, static_cast<int>(std::min(remaining_ms(), 200L)));
        if (pr < 0) return fail([] { return IoError("poll on planner output failed"); });
        if (pr == 0) {
            if (remaining_ms() == 0)
                return fail([&] { return Timeout("planner silent past the deadline"); });
            continue;
        }
        ssize_t n = read(from_child.fds[0], buf, sizeof(buf));
        if (n < 0) return fail([] { return IoError("read from planner failed"); });
        if (n == 0) break;  // EOF
        line.append(buf, static_cast<size_t>(n));
        if (line.find('\n') != std::string::npos) got_line = true;
    }

    int status = 0;
    ::kill(-pid, SIGKILL);  // single-shot protocol: the planner is done now
    waitpid(pid, &status, 0);

    size_t nl = line.find('\n');
    if (nl != std::string::npos) line.resize(nl);
    if (line.empty()) throw ProtocolError("planner closed its stream without a response");
    return parse_plan_response(line, gripper, options);
}

}  // namespace graspbench
